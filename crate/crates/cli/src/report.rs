//! `feasibility`: laboratory inputs to couplings, loss estimate and verdicts.

use std::fmt::Write as _;

use clap::Args;
use vdl_core::constants::C;
use vdl_core::feasibility::{
    alpha_from_dipole, efield_amplitude, full_report_with, induced_dipole, FeasibilityReport, ReportOptions,
    TransitConvention, DEFAULT_ALPHA_CRIT,
};

use crate::config::{Config, Experiment, REQUIRED_KEYS, TRANSIT_KEY};
use crate::error::CliResult;
use crate::output::{emit, num, Manifest, Table};
use crate::Globals;

#[derive(Args, Debug)]
pub struct FeasibilityArgs {
    /// Override or supply a configuration key, e.g. `--set cavity.L=2e-3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub assignments: Vec<String>,
    /// Critical coupling for the dipole threshold verdict.
    #[arg(long, default_value_t = DEFAULT_ALPHA_CRIT)]
    pub alpha_crit: f64,
}

/// `(α, κ, τ)` implied by an experiment, with the switched-off arm undressed.
pub fn derived_params(exp: &Experiment) -> CliResult<(f64, f64, f64)> {
    exp.molecule.validate()?;
    exp.laser.validate()?;
    exp.cavity.validate()?;
    let dipole = induced_dipole(&exp.molecule, efield_amplitude(&exp.laser)?)?;
    let alpha = alpha_from_dipole(dipole, 0.0, &exp.cavity)?;
    let tau = C * exp.transit.transit_time(&exp.laser, &exp.molecule) / exp.cavity.plate_separation;
    Ok((alpha, exp.cavity.kappa(), tau))
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn human_summary(name: &str, r: &FeasibilityReport) -> String {
    let v = &r.verdicts;
    let mut s = String::new();
    let _ = writeln!(s, "feasibility report for {name}");
    let _ = writeln!(s, "  field amplitude |E|      {:.4e} V/m", r.efield);
    let _ = writeln!(s, "  induced dipole d         {:.4e} C·m", r.dipole);
    let _ = writeln!(s, "  coupling alpha           {:.4e}", r.alpha);
    let _ = writeln!(s, "  cutoff kappa             {:.4e}", r.kappa);
    let _ = writeln!(s, "  duration tau             {:.4e}", r.tau);
    let _ = writeln!(s, "  kernel D                 {:.6}", r.kernel);
    let _ = writeln!(s, "  visibility loss 1 - D    {:.4e}", r.visibility_loss_proxy);
    let _ = writeln!(s, "  late-time loss           {:.4e}", r.late_time_loss);
    let _ = writeln!(
        s,
        "  [{}] suddenness            a/L = {:.3e} vs v/c = {:.3e}",
        verdict(v.suddenness).to_uppercase(),
        r.suddenness.size_ratio,
        r.suddenness.velocity_ratio
    );
    let _ = writeln!(
        s,
        "  [{}] diffraction limit     sigma_z >= grating period",
        verdict(v.diffraction_limit).to_uppercase()
    );
    let _ = writeln!(
        s,
        "  [{}] dipole threshold      needs {:.3e} C·m at alpha_crit = {}, short by {:.2} decades",
        verdict(v.dipole_threshold).to_uppercase(),
        r.threshold_dipole,
        r.alpha_crit,
        r.threshold_shortfall_decades
    );
    let _ = writeln!(
        s,
        "  [{}] image charge          Q = {:.3} e, tau_d = {:.3e} s, transit {:.3e} s",
        verdict(v.image_charge).to_uppercase(),
        r.image.charge_in_e(),
        r.image.decoherence_time,
        r.image.transit_time
    );
    let _ = writeln!(s, "  overall: {}", verdict(v.all_pass()));
    s
}

pub fn feasibility(g: &Globals, args: &FeasibilityArgs) -> CliResult<()> {
    let (mut cfg, name) = match &g.config {
        Some(path) => (
            Config::load(path)?,
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        ),
        None => (Config::default(), "custom".to_string()),
    };
    cfg.override_with(&args.assignments)?;
    let exp = cfg.experiment(&name)?;
    let opts = ReportOptions {
        transit: exp.transit,
        alpha_crit: args.alpha_crit,
        policy: g.policy,
    };
    let r = full_report_with(&exp.molecule, &exp.laser, &exp.cavity, &opts)?;

    let mut m = Manifest::new("feasibility");
    m.input("name", &name);
    for (k, v) in cfg.entries() {
        m.input(k, v);
    }
    if cfg.entries().all(|(k, _)| k != TRANSIT_KEY) {
        m.input(TRANSIT_KEY, "sigma_over_v");
    }
    m.input("alpha_crit", args.alpha_crit)
        .input("tail_bound", g.policy.tail_bound);
    let sets: Vec<String> = cfg
        .entries()
        .filter(|(k, _)| REQUIRED_KEYS.contains(k) || *k == TRANSIT_KEY)
        .map(|(k, v)| format!("--set {k}={v}"))
        .collect();
    m.reproduce = format!(
        "vdl feasibility {} --alpha-crit {:?} --tail-bound {:?}",
        sets.join(" "),
        args.alpha_crit,
        g.policy.tail_bound
    );

    let mut rows: Vec<Vec<String>> = r.rows().into_iter().map(|(k, v)| vec![k.to_string(), num(v)]).collect();
    let v = &r.verdicts;
    for (k, pass) in [
        ("verdict.suddenness", v.suddenness),
        ("verdict.diffraction_limit", v.diffraction_limit),
        ("verdict.dipole_threshold", v.dipole_threshold),
        ("verdict.image_charge", v.image_charge),
        ("verdict.all", v.all_pass()),
    ] {
        rows.push(vec![k.to_string(), verdict(pass).to_string()]);
    }
    rows.push(vec![
        "transit_convention".into(),
        match exp.transit {
            TransitConvention::SigmaOverV => "sigma_over_v",
            TransitConvention::TwoSigmaOverV => "two_sigma_over_v",
        }
        .into(),
    ]);
    let table = Table {
        manifest: m,
        header: vec!["key", "value"],
        rows,
    };
    emit(g.out.as_deref(), &table.render())?;

    let summary = human_summary(&name, &r);
    if g.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}
