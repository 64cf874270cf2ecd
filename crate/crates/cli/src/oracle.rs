//! `oracle-check`: closed-form terms against direct quadrature, cell by cell.

use std::f64::consts::PI;

use clap::Args;
use rayon::prelude::*;
use vdl_core::kernel::{kernel_term, DimensionlessParams};
use vdl_core::modesum::{radial_integral_m, QuadratureSpec};
use vdl_core::Error;

use crate::error::{CliError, CliResult};
use crate::output::{emit, num, Manifest, Table};
use crate::Globals;

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Largest image index m.
    #[arg(long, default_value_t = 6)]
    pub m_max: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [50.0, 200.0, 1000.0])]
    pub kappas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.9, 1.7, 2.5])]
    pub taus: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Largest acceptable relative difference.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

struct Cell {
    m: u64,
    kappa: f64,
    tau: f64,
    closed: f64,
    quadrature: f64,
    rel_err: f64,
    status: &'static str,
}

fn check_cell(m: u64, kappa: f64, tau: f64, alpha: f64, tol: f64, q: &QuadratureSpec) -> CliResult<Cell> {
    let p = DimensionlessParams::new(alpha, kappa, tau)?;
    let closed = kernel_term(m, &p)?;
    let mut cell = Cell {
        m,
        kappa,
        tau,
        closed,
        quadrature: f64::NAN,
        rel_err: f64::NAN,
        status: "ok",
    };
    match radial_integral_m(m, kappa, tau, q) {
        Ok(i) => {
            let quad = 2.0 * alpha * alpha / PI * i;
            let diff = (quad - closed).abs();
            cell.quadrature = quad;
            cell.rel_err = if closed != 0.0 { diff / closed.abs() } else { diff };
            if !(cell.rel_err <= tol) {
                cell.status = "exceeds";
            }
        }
        Err(Error::Capability(_)) => cell.status = "capability",
        Err(Error::Quadrature { value, .. }) => {
            cell.quadrature = 2.0 * alpha * alpha / PI * value;
            cell.status = "quadrature_failed";
        }
        Err(e) => return Err(e.into()),
    }
    Ok(cell)
}

pub fn oracle_check(g: &Globals, args: &OracleArgs) -> CliResult<()> {
    if args.m_max < 1 || args.kappas.is_empty() || args.taus.is_empty() {
        return Err(CliError::Usage("oracle-check needs m_max >= 1 and non-empty κ and τ lists".into()));
    }
    if !(args.tolerance > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be > 0, got {}", args.tolerance)));
    }
    let q = QuadratureSpec::default();
    let mut grid = Vec::new();
    for m in 1..=args.m_max {
        for &kappa in &args.kappas {
            for &tau in &args.taus {
                grid.push((m, kappa, tau));
            }
        }
    }
    let cells = grid
        .par_iter()
        .map(|&(m, kappa, tau)| check_cell(m, kappa, tau, args.alpha, args.tolerance, &q))
        .collect::<CliResult<Vec<_>>>()?;

    let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",");
    let mut manifest = Manifest::new("oracle-check");
    manifest
        .input("m_max", args.m_max)
        .input("kappas", join(&args.kappas))
        .input("taus", join(&args.taus))
        .input("alpha", args.alpha)
        .input("tolerance", args.tolerance)
        .input("quadrature_rel_tol", q.rel_tol)
        .input("quadrature_abs_tol", q.abs_tol);
    manifest.reproduce = format!(
        "vdl oracle-check --m-max {} --kappas {} --taus {} --alpha {:?} --tolerance {:?}",
        args.m_max,
        join(&args.kappas),
        join(&args.taus),
        args.alpha,
        args.tolerance
    );
    let table = Table {
        manifest,
        header: vec!["m", "kappa", "tau", "closed", "quadrature", "rel_err", "status"],
        rows: cells
            .iter()
            .map(|c| {
                vec![
                    c.m.to_string(),
                    num(c.kappa),
                    num(c.tau),
                    num(c.closed),
                    num(c.quadrature),
                    num(c.rel_err),
                    c.status.to_string(),
                ]
            })
            .collect(),
    };
    emit(g.out.as_deref(), &table.render())?;

    let bad = cells
        .iter()
        .filter(|c| c.status == "exceeds" || c.status == "quadrature_failed")
        .count();
    let skipped = cells.iter().filter(|c| c.status == "capability").count();
    let worst = cells
        .iter()
        .filter(|c| c.rel_err.is_finite())
        .map(|c| c.rel_err)
        .fold(0.0, f64::max);
    eprintln!(
        "oracle-check: {} cells, worst rel_err {worst:.3e}, {bad} over tolerance {:e}, {skipped} beyond quadrature range",
        cells.len(),
        args.tolerance
    );
    if bad > 0 {
        return Err(CliError::Numerical(format!(
            "{bad} cells exceed the tolerance {:e}",
            args.tolerance
        )));
    }
    Ok(())
}
