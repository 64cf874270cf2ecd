//! `kernel-sweep` and `figure2`.

use std::fmt;
use std::path::Path;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use vdl_core::kernel::{decoherence_kernel, DimensionlessParams};
use vdl_core::{Error, SeriesPolicy};

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::{emit, num, Manifest, Table};
use crate::report::derived_params;
use crate::Globals;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    Tau,
    Alpha,
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Tau => "tau",
            Variable::Alpha => "alpha",
            Variable::Kappa => "kappa",
        })
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        })
    }
}

/// Which parameter to vary and over what range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start >= self.stop {
            return Err(CliError::Usage(format!(
                "sweep needs finite start < stop, got {} .. {}",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage(format!("sweep needs >= 2 points, got {}", self.points)));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return Err(CliError::Usage("a log sweep needs start > 0".into()));
        }
        Ok(())
    }

    /// Sample points; the end points are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * f,
                    Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

pub const SWEEP_HEADER: [&str; 6] = ["tau", "alpha", "kappa", "gamma", "D", "status"];

/// One evaluated point. Non-convergence keeps the partial sum and is flagged.
pub struct SweepRow {
    pub params: DimensionlessParams,
    pub gamma: f64,
    pub kernel: f64,
    pub status: &'static str,
}

impl SweepRow {
    fn cells(&self) -> Vec<String> {
        vec![
            num(self.params.tau),
            num(self.params.alpha),
            num(self.params.kappa),
            num(self.gamma),
            num(self.kernel),
            self.status.to_string(),
        ]
    }
}

fn evaluate(p: DimensionlessParams, policy: &SeriesPolicy) -> SweepRow {
    match decoherence_kernel(&p, policy) {
        Ok(r) => SweepRow {
            params: p,
            gamma: r.gamma,
            kernel: r.kernel,
            status: if r.is_contractive() { "ok" } else { "noncontractive" },
        },
        Err(Error::NonConvergence { partial_gamma, .. }) => SweepRow {
            params: p,
            gamma: partial_gamma,
            kernel: (-partial_gamma).exp(),
            status: "nonconvergent",
        },
        Err(_) => SweepRow {
            params: p,
            gamma: f64::NAN,
            kernel: f64::NAN,
            status: "error",
        },
    }
}

/// Evaluate every point concurrently; rows come back in input order.
pub fn run_sweep(points: &[DimensionlessParams], policy: &SeriesPolicy) -> Vec<SweepRow> {
    points.par_iter().map(|&p| evaluate(p, policy)).collect()
}

fn failures(rows: &[SweepRow]) -> usize {
    rows.iter().filter(|r| r.status == "nonconvergent" || r.status == "error").count()
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Parameter to vary.
    #[arg(long, value_enum, default_value_t = Variable::Tau)]
    pub variable: Variable,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
    /// Coupling α when it is not the swept variable [default: 0.5, or from --config].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Cutoff κ = k_max L when it is not swept [default: 1e8, or from --config].
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Duration τ = cT/L when it is not swept [default: 10.5, or from --config].
    #[arg(long)]
    pub tau: Option<f64>,
}

fn policy_flag(policy: &SeriesPolicy) -> String {
    format!("--tail-bound {:?}", policy.tail_bound)
}

pub fn kernel_sweep(g: &Globals, args: &SweepArgs) -> CliResult<()> {
    let spec = SweepSpec {
        variable: args.variable,
        start: args.start,
        stop: args.stop,
        points: args.points,
        scale: args.scale,
    };
    spec.validate()?;

    let (mut alpha, mut kappa, mut tau) = (0.5, 1e8, 10.5);
    if let Some(path) = &g.config {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let exp = Config::load(path)?.experiment(&name)?;
        (alpha, kappa, tau) = derived_params(&exp)?;
    }
    alpha = args.alpha.unwrap_or(alpha);
    kappa = args.kappa.unwrap_or(kappa);
    tau = args.tau.unwrap_or(tau);

    let points = spec
        .values()
        .into_iter()
        .map(|v| {
            let (a, k, t) = match spec.variable {
                Variable::Tau => (alpha, kappa, v),
                Variable::Alpha => (v, kappa, tau),
                Variable::Kappa => (alpha, v, tau),
            };
            DimensionlessParams::new(a, k, t)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = run_sweep(&points, &g.policy);

    let mut m = Manifest::new("kernel-sweep");
    m.input("variable", spec.variable.to_string())
        .input("start", spec.start)
        .input("stop", spec.stop)
        .input("points", spec.points)
        .input("scale", spec.scale.to_string())
        .input("alpha", alpha)
        .input("kappa", kappa)
        .input("tau", tau)
        .input("tail_bound", g.policy.tail_bound)
        .input("max_terms", g.policy.max_terms);
    m.reproduce = format!(
        "vdl kernel-sweep --variable {} --start {:?} --stop {:?} --points {} --scale {} --alpha {alpha:?} --kappa {kappa:?} --tau {tau:?} {}",
        spec.variable,
        spec.start,
        spec.stop,
        spec.points,
        spec.scale,
        policy_flag(&g.policy)
    );
    write_rows(g.out.as_deref(), m, &rows)
}

fn write_rows(out: Option<&Path>, manifest: Manifest, rows: &[SweepRow]) -> CliResult<()> {
    let table = Table {
        manifest,
        header: SWEEP_HEADER.to_vec(),
        rows: rows.iter().map(SweepRow::cells).collect(),
    };
    emit(out, &table.render())?;
    match failures(rows) {
        0 => Ok(()),
        n => Err(CliError::Numerical(format!(
            "{n} of {} points did not converge; they are flagged in the status column",
            rows.len()
        ))),
    }
}

#[derive(Args, Debug)]
pub struct Figure2Args {
    /// Couplings, one curve each.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5])]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long, default_value_t = 1e8)]
    pub kappa: f64,
    #[arg(long, default_value_t = 5.0)]
    pub tau_max: f64,
}

pub fn figure2(g: &Globals, args: &Figure2Args) -> CliResult<()> {
    if args.alphas.is_empty() {
        return Err(CliError::Usage("--alphas needs at least one value".into()));
    }
    if args.points < 1000 {
        return Err(CliError::Usage(format!("figure2 needs >= 1000 points, got {}", args.points)));
    }
    let spec = SweepSpec {
        variable: Variable::Tau,
        start: 0.0,
        stop: args.tau_max,
        points: args.points,
        scale: Scale::Linear,
    };
    spec.validate()?;
    let dir = g.out.clone().unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(dir.display(), e))?;

    let taus = spec.values();
    let mut failed = 0;
    for &alpha in &args.alphas {
        let points = taus
            .iter()
            .map(|&t| DimensionlessParams::new(alpha, args.kappa, t))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = run_sweep(&points, &g.policy);
        let mut m = Manifest::new("figure2");
        m.input("alpha", alpha)
            .input("kappa", args.kappa)
            .input("tau_max", args.tau_max)
            .input("points", args.points)
            .input("tail_bound", g.policy.tail_bound)
            .input("max_terms", g.policy.max_terms);
        m.reproduce = format!(
            "vdl kernel-sweep --variable tau --start 0 --stop {:?} --points {} --scale linear --alpha {alpha:?} --kappa {:?} {}",
            args.tau_max,
            args.points,
            args.kappa,
            policy_flag(&g.policy)
        );
        let path = dir.join(format!("figure2_alpha_{alpha}.csv"));
        match write_rows(Some(&path), m, &rows) {
            Err(CliError::Numerical(_)) => failed += 1,
            other => other?,
        }
        eprintln!("wrote {}", path.display());
    }
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} curves contain non-converged points")));
    }
    Ok(())
}
