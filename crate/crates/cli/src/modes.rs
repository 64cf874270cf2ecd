//! `modes-demo`: refine the discrete-mode grid and watch it approach the
//! mode-sum reference.

use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use vdl_core::cavityfield::{overlap, DipoleProfile, ModeGrid};
use vdl_core::constants::{dipole_scale, C};
use vdl_core::kernel::{kernel_at_plates, DimensionlessParams};
use vdl_core::modesum::{full_exponent, m0_term, QuadratureSpec};

use crate::error::{CliError, CliResult};
use crate::output::{emit, num, Manifest, Table};
use crate::Globals;

/// Largest cutoff the demo accepts.
pub const DEMO_MAX_KAPPA: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// Both arms near the centre; switched-on arm carries the dipole.
    Center,
    /// Arms at the two plates with opposite dipoles.
    Plates,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    #[arg(long, default_value_t = 50.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.4)]
    pub tau: f64,
    /// Dipole moment of the switched-on arm, C·m.
    #[arg(long, default_value_t = 1e-22)]
    pub dipole: f64,
    /// Plate separation L, m.
    #[arg(long, default_value_t = 1e-3)]
    pub plate_separation: f64,
    /// Grid sizes, each used for both the n and the k∥ axis.
    #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200, 400])]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Layout::Center)]
    pub layout: Layout,
}

impl Layout {
    fn name(self) -> &'static str {
        match self {
            Layout::Center => "center",
            Layout::Plates => "plates",
        }
    }

    fn profiles(self, d: f64) -> (DipoleProfile, DipoleProfile) {
        match self {
            Layout::Center => (DipoleProfile::center(d), DipoleProfile::center(0.0)),
            Layout::Plates => (DipoleProfile::left_plate(-d), DipoleProfile::right_plate(d)),
        }
    }
}

/// Overlap the grid should converge to.
fn reference_overlap(args: &ModesArgs) -> CliResult<f64> {
    let l = args.plate_separation;
    match args.layout {
        Layout::Center => {
            let alpha = args.dipole.abs() / (l * dipole_scale());
            let p = DimensionlessParams::new(alpha, args.kappa, args.tau)?;
            Ok((-full_exponent(&p, &QuadratureSpec::default())?).exp())
        }
        Layout::Plates => {
            // the plates kernel omits the free-space factor, supplied here
            let alpha = 2.0 * args.dipole.abs() / (l * dipole_scale());
            let free = alpha * alpha / PI * m0_term(args.kappa, args.tau)?;
            let d = args.dipole.abs();
            let k = kernel_at_plates(-d, d, l, args.kappa, args.tau)?;
            Ok((-free).exp() * k.kernel)
        }
    }
}

pub fn modes_demo(g: &Globals, args: &ModesArgs) -> CliResult<()> {
    if !(args.kappa > 0.0 && args.kappa <= DEMO_MAX_KAPPA) {
        return Err(CliError::Usage(format!(
            "modes-demo needs 0 < κ <= {DEMO_MAX_KAPPA}, got {}",
            args.kappa
        )));
    }
    if args.sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one grid size".into()));
    }
    let reference = reference_overlap(args)?;
    let (a, b) = args.layout.profiles(args.dipole);
    let t = args.tau * args.plate_separation / C;

    let mut rows = Vec::new();
    let mut devs = Vec::new();
    for &size in &args.sizes {
        let grid = ModeGrid::square(size, args.kappa, args.plate_separation)?;
        let got = overlap(&a, &b, t, 2, &grid)?;
        let dev = ((got - reference) / reference).abs();
        devs.push((size, dev));
        rows.push(vec![size.to_string(), num(got), num(reference), num(dev)]);
    }

    let sizes = args.sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    let mut m = Manifest::new("modes-demo");
    m.input("layout", args.layout.name())
        .input("kappa", args.kappa)
        .input("tau", args.tau)
        .input("dipole", args.dipole)
        .input("plate_separation", args.plate_separation)
        .input("sizes", &sizes);
    m.reproduce = format!(
        "vdl modes-demo --layout {} --kappa {:?} --tau {:?} --dipole {:?} --plate-separation {:?} --sizes {sizes}",
        args.layout.name(),
        args.kappa,
        args.tau,
        args.dipole,
        args.plate_separation
    );
    let table = Table {
        manifest: m,
        header: vec!["grid_size", "overlap_grid", "overlap_reference", "rel_dev"],
        rows,
    };
    emit(g.out.as_deref(), &table.render())?;

    for w in devs.windows(2) {
        let ((s0, d0), (s1, d1)) = (w[0], w[1]);
        if d0 > 0.0 && d1 > 0.0 && s1 != s0 {
            let order = (d0 / d1).ln() / (s1 as f64 / s0 as f64).ln();
            eprintln!("modes-demo: {s0} -> {s1}: observed order {order:.2}");
        }
    }
    Ok(())
}
