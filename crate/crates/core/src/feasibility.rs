//! From laboratory inputs to the kernel parameters, plus the
//! order-of-magnitude checks that decide whether the effect is observable.
//!
//! The chain is: laser power and waist give the field amplitude `|E|`, the
//! polarizability turns it into an induced dipole `d = α_p |E|`, the plate
//! separation turns `d` into the coupling `α`, and the time spent in the
//! grating gives `τ`. The switched-off arm carries no dipole.

use std::f64::consts::PI;

use crate::constants::{self, C, ELEMENTARY_CHARGE, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::kernel::{decoherence_kernel, DimensionlessParams, SeriesPolicy};

/// Critical coupling used for the dipole threshold verdict.
pub const DEFAULT_ALPHA_CRIT: f64 = 0.1;

/// A dipole passes the threshold check when it falls short of the threshold
/// by at most this many decades.
pub const THRESHOLD_DECADE_SLACK: f64 = 0.5;

/// The transit time must be at most this fraction of the image-current
/// decoherence time.
pub const IMAGE_TIME_RATIO: f64 = 1e-2;

/// Relative slack on the `a/L ≤ v_z/c` comparison, so that inputs sitting
/// exactly on the boundary are not decided by rounding.
const SUDDENNESS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeSpec {
    pub name: String,
    /// Static polarizability, C·m²/V.
    pub polarizability: f64,
    /// Diameter, m.
    pub size: f64,
    /// Mass, kg.
    pub mass: f64,
    /// Forward velocity, m/s.
    pub velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserConfig {
    /// W.
    pub power: f64,
    /// Waist along y, m.
    pub sigma_y: f64,
    /// Waist along the flight direction z, m.
    pub sigma_z: f64,
    /// Grating period l, m.
    pub grating_period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityConfig {
    /// L, m.
    pub plate_separation: f64,
    /// k_max, 1/m.
    pub cutoff_wavenumber: f64,
}

/// How long the dipole is considered switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransitConvention {
    /// `T = σ_z / v_z`.
    #[default]
    SigmaOverV,
    /// `T = 2σ_z / v_z`, entry at `-σ_z` to exit at `+σ_z`.
    TwoSigmaOverV,
}

impl TransitConvention {
    pub fn transit_time(self, laser: &LaserConfig, molecule: &MoleculeSpec) -> f64 {
        match self {
            TransitConvention::SigmaOverV => laser.sigma_z / molecule.velocity,
            TransitConvention::TwoSigmaOverV => 2.0 * laser.sigma_z / molecule.velocity,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and >= 0, got {v}")))
    }
}

impl MoleculeSpec {
    pub fn validate(&self) -> Result<()> {
        positive("molecule.polarizability", self.polarizability)?;
        positive("molecule.size", self.size)?;
        positive("molecule.mass", self.mass)?;
        positive("molecule.velocity", self.velocity)
    }
}

impl LaserConfig {
    pub fn validate(&self) -> Result<()> {
        // zero power is allowed: it simply means no dipole is induced
        non_negative("laser.power", self.power)?;
        positive("laser.sigma_y", self.sigma_y)?;
        positive("laser.sigma_z", self.sigma_z)?;
        positive("laser.period", self.grating_period)
    }

    /// `σ_z` cannot be focused below the grating period.
    pub fn within_diffraction_limit(&self) -> bool {
        self.sigma_z >= self.grating_period
    }
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        positive("cavity.L", self.plate_separation)?;
        positive("cavity.k_max", self.cutoff_wavenumber)
    }

    /// Cutoff at the inverse molecule size.
    pub fn with_size_cutoff(plate_separation: f64, molecule: &MoleculeSpec) -> Self {
        Self {
            plate_separation,
            cutoff_wavenumber: 1.0 / molecule.size,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.cutoff_wavenumber * self.plate_separation
    }
}

/// Standing-wave intensity `8P/(π σ_z σ_y) exp(-2y²/σ_y² - 2z²/σ_z²) sin²(πx/l)`.
pub fn laser_intensity(x: f64, y: f64, z: f64, laser: &LaserConfig) -> Result<f64> {
    laser.validate()?;
    let peak = 8.0 * laser.power / (PI * laser.sigma_z * laser.sigma_y);
    let envelope = (-2.0 * y * y / (laser.sigma_y * laser.sigma_y) - 2.0 * z * z / (laser.sigma_z * laser.sigma_z)).exp();
    let s = (PI * x / laser.grating_period).sin();
    Ok(peak * envelope * s * s)
}

/// `|E| = sqrt(2 I_peak / (c ε₀)) = sqrt(16 P / (π σ_z σ_y ε₀ c))`, V/m.
pub fn efield_amplitude(laser: &LaserConfig) -> Result<f64> {
    laser.validate()?;
    Ok((16.0 * laser.power / (PI * laser.sigma_z * laser.sigma_y * EPSILON_0 * C)).sqrt())
}

/// `d = α_p |E|`, C·m.
pub fn induced_dipole(molecule: &MoleculeSpec, efield: f64) -> Result<f64> {
    positive("molecule.polarizability", molecule.polarizability)?;
    non_negative("efield", efield)?;
    Ok(molecule.polarizability * efield)
}

/// `α = |d_on - d_off| / (L sqrt(4π ε₀ ħ c))`.
pub fn alpha_from_dipole(d_on: f64, d_off: f64, cavity: &CavityConfig) -> Result<f64> {
    positive("cavity.L", cavity.plate_separation)?;
    if !(d_on.is_finite() && d_off.is_finite()) {
        return Err(Error::domain("dipole moments must be finite"));
    }
    Ok((d_on - d_off).abs() / (cavity.plate_separation * constants::dipole_scale()))
}

/// Dipole needed to reach coupling `alpha_crit`: `α_crit L sqrt(4π ε₀ ħ c)`.
pub fn dipole_threshold(alpha_crit: f64, cavity: &CavityConfig) -> Result<f64> {
    non_negative("alpha_crit", alpha_crit)?;
    positive("cavity.L", cavity.plate_separation)?;
    Ok(alpha_crit * cavity.plate_separation * constants::dipole_scale())
}

/// Kapitza–Dirac peak phase `φ₀ = 8 sqrt(2π) α_p P / (ħ c σ_y v_z)`.
pub fn grating_phase_amplitude(molecule: &MoleculeSpec, laser: &LaserConfig) -> Result<f64> {
    molecule.validate()?;
    laser.validate()?;
    Ok(8.0 * (2.0 * PI).sqrt() * molecule.polarizability / (HBAR * C) * laser.power
        / (laser.sigma_y * molecule.velocity))
}

/// Position-dependent grating phase `φ₀ sin²(πx/l)`; independent of `σ_z`.
pub fn grating_phase(x: f64, molecule: &MoleculeSpec, laser: &LaserConfig) -> Result<f64> {
    let phi0 = grating_phase_amplitude(molecule, laser)?;
    let s = (PI * x / laser.grating_period).sin();
    Ok(phi0 * s * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuddennessCheck {
    /// Molecule size over plate separation, `a/L`.
    pub size_ratio: f64,
    /// `v_z / c`.
    pub velocity_ratio: f64,
    pub pass: bool,
}

/// Switching counts as sudden when `a/L ≤ v_z/c`: crossing its own diameter
/// takes the particle less time than light needs to cross the cavity.
pub fn suddenness_check(molecule: &MoleculeSpec, cavity: &CavityConfig) -> Result<SuddennessCheck> {
    positive("molecule.size", molecule.size)?;
    positive("molecule.velocity", molecule.velocity)?;
    positive("cavity.L", cavity.plate_separation)?;
    let size_ratio = molecule.size / cavity.plate_separation;
    let velocity_ratio = molecule.velocity / C;
    Ok(SuddennessCheck {
        size_ratio,
        velocity_ratio,
        pass: size_ratio <= velocity_ratio * (1.0 + SUDDENNESS_SLACK),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageChargeAssessment {
    /// Induced image charge `Q ≈ d/L`, C.
    pub charge: f64,
    /// Single-ion image-current decoherence time at distance `L`, s.
    pub decoherence_time: f64,
    pub transit_time: f64,
    pub pass: bool,
}

impl ImageChargeAssessment {
    pub fn charge_in_e(&self) -> f64 {
        self.charge / ELEMENTARY_CHARGE
    }
}

/// Image-current competitor: `Q = d/L` and `τ_d = (10⁴ L/m)³ × 10⁻⁵ s`,
/// passing when the transit time is at most 1% of `τ_d`.
pub fn image_charge_assessment(d: f64, cavity: &CavityConfig, transit_time: f64) -> Result<ImageChargeAssessment> {
    non_negative("dipole", d)?;
    positive("cavity.L", cavity.plate_separation)?;
    non_negative("transit time", transit_time)?;
    let l = cavity.plate_separation;
    let decoherence_time = (1e4 * l).powi(3) * 1e-5;
    Ok(ImageChargeAssessment {
        charge: d / l,
        decoherence_time,
        transit_time,
        pass: transit_time <= IMAGE_TIME_RATIO * decoherence_time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    /// `a/L ≤ v_z/c`.
    pub suddenness: bool,
    /// `σ_z ≥ l`.
    pub diffraction_limit: bool,
    /// Dipole within half a decade of the `α_crit` threshold, or above it.
    pub dipole_threshold: bool,
    /// Transit time ≪ image-current decoherence time.
    pub image_charge: bool,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.suddenness && self.diffraction_limit && self.dipole_threshold && self.image_charge
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub efield: f64,
    pub dipole: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub tau: f64,
    pub suddenness: SuddennessCheck,
    pub phase_amplitude: f64,
    pub alpha_crit: f64,
    pub threshold_dipole: f64,
    /// `log10(threshold / dipole)`; positive when the dipole falls short.
    pub threshold_shortfall_decades: f64,
    pub image: ImageChargeAssessment,
    pub grating_transit_time: f64,
    pub gamma: f64,
    pub kernel: f64,
    /// `1 - D`.
    pub visibility_loss_proxy: f64,
    /// Late-time limit `1 - exp(-2πα²/3)`.
    pub late_time_loss: f64,
    pub verdicts: Verdicts,
}

impl FeasibilityReport {
    /// Name/value rows in a fixed order.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("efield_V_per_m", self.efield),
            ("dipole_C_m", self.dipole),
            ("alpha", self.alpha),
            ("kappa", self.kappa),
            ("tau", self.tau),
            ("size_over_L", self.suddenness.size_ratio),
            ("vz_over_c", self.suddenness.velocity_ratio),
            ("phase_amplitude_rad", self.phase_amplitude),
            ("alpha_crit", self.alpha_crit),
            ("threshold_dipole_C_m", self.threshold_dipole),
            ("threshold_shortfall_decades", self.threshold_shortfall_decades),
            ("image_charge_C", self.image.charge),
            ("image_charge_e", self.image.charge_in_e()),
            ("image_decoherence_time_s", self.image.decoherence_time),
            ("grating_transit_time_s", self.grating_transit_time),
            ("gamma", self.gamma),
            ("kernel_D", self.kernel),
            ("visibility_loss_proxy", self.visibility_loss_proxy),
            ("late_time_loss", self.late_time_loss),
        ]
    }
}

/// Options for [`full_report_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub transit: TransitConvention,
    pub alpha_crit: f64,
    pub policy: SeriesPolicy,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            transit: TransitConvention::default(),
            alpha_crit: DEFAULT_ALPHA_CRIT,
            policy: SeriesPolicy::default(),
        }
    }
}

pub fn full_report(molecule: &MoleculeSpec, laser: &LaserConfig, cavity: &CavityConfig) -> Result<FeasibilityReport> {
    full_report_with(molecule, laser, cavity, &ReportOptions::default())
}

pub fn full_report_with(
    molecule: &MoleculeSpec,
    laser: &LaserConfig,
    cavity: &CavityConfig,
    opts: &ReportOptions,
) -> Result<FeasibilityReport> {
    molecule.validate()?;
    laser.validate()?;
    cavity.validate()?;
    positive("alpha_crit", opts.alpha_crit)?;

    let efield = efield_amplitude(laser)?;
    let dipole = induced_dipole(molecule, efield)?;
    let alpha = alpha_from_dipole(dipole, 0.0, cavity)?;
    let transit = opts.transit.transit_time(laser, molecule);
    let tau = C * transit / cavity.plate_separation;
    let kappa = cavity.kappa();

    let params = DimensionlessParams::new(alpha, kappa, tau)?;
    let kernel = decoherence_kernel(&params, &opts.policy)?;

    let suddenness = suddenness_check(molecule, cavity)?;
    let threshold = dipole_threshold(opts.alpha_crit, cavity)?;
    let shortfall = if dipole > 0.0 {
        (threshold / dipole).log10()
    } else {
        f64::INFINITY
    };
    let image = image_charge_assessment(dipole, cavity, transit)?;
    let verdicts = Verdicts {
        suddenness: suddenness.pass,
        diffraction_limit: laser.within_diffraction_limit(),
        dipole_threshold: shortfall <= THRESHOLD_DECADE_SLACK,
        image_charge: image.pass,
    };
    let visibility_loss_proxy = (-kernel.gamma).exp_m1().abs().min(1.0);
    Ok(FeasibilityReport {
        efield,
        dipole,
        alpha,
        kappa,
        tau,
        suddenness,
        phase_amplitude: grating_phase_amplitude(molecule, laser)?,
        alpha_crit: opts.alpha_crit,
        threshold_dipole: threshold,
        threshold_shortfall_decades: shortfall,
        image,
        grating_transit_time: transit,
        gamma: kernel.gamma,
        kernel: kernel.kernel,
        visibility_loss_proxy,
        late_time_loss: -(-2.0 * PI * alpha * alpha / 3.0).exp_m1(),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laser() -> LaserConfig {
        LaserConfig {
            power: 10.0,
            sigma_y: 1e-3,
            sigma_z: 1e-7,
            grating_period: 1e-7,
        }
    }

    fn molecule(polarizability: f64) -> MoleculeSpec {
        MoleculeSpec {
            name: "test".into(),
            polarizability,
            size: 1e-9,
            mass: 1e6 * 1.660_539_066_60e-27,
            velocity: 300.0,
        }
    }

    fn cavity(l: f64) -> CavityConfig {
        CavityConfig {
            plate_separation: l,
            cutoff_wavenumber: 1e10,
        }
    }

    #[test]
    fn intensity_profile() {
        let las = laser();
        let peak = 8.0 * las.power / (PI * las.sigma_z * las.sigma_y);
        assert_eq!(laser_intensity(0.0, 1e-4, 2e-8, &las).unwrap(), 0.0);
        let top = laser_intensity(las.grating_period / 2.0, 0.0, 0.0, &las).unwrap();
        assert!((top - peak).abs() <= 1e-12 * peak);
        let off = laser_intensity(las.grating_period / 2.0, las.sigma_y, 0.0, &las).unwrap();
        assert!((off - peak * (-2.0f64).exp()).abs() <= 1e-12 * peak);
    }

    #[test]
    fn efield_formula_and_scaling() {
        let e = efield_amplitude(&laser()).unwrap();
        // sqrt(160 / (π 1e-10 ε₀ c)) at 20 digits
        assert!((e - 13851612.657898580499).abs() < 1e-6);
        let e4 = efield_amplitude(&LaserConfig { power: 40.0, ..laser() }).unwrap();
        assert!((e4 / e - 2.0).abs() < 1e-14);
    }

    #[test]
    fn induced_dipoles() {
        let e = efield_amplitude(&laser()).unwrap();
        assert_eq!(induced_dipole(&molecule(1e-32), 0.0).unwrap(), 0.0);
        let d60 = induced_dipole(&molecule(1e-32), e).unwrap();
        assert_eq!(d60.log10().round(), -25.0);
        let dna = induced_dipole(&molecule(1e-29), e).unwrap();
        assert_eq!(dna.log10().round(), -22.0);
    }

    #[test]
    fn alpha_and_threshold_are_inverse() {
        let cav = cavity(1e-3);
        assert_eq!(alpha_from_dipole(3e-22, 3e-22, &cav).unwrap(), 0.0);
        let a1 = alpha_from_dipole(1e-22, 0.0, &cav).unwrap();
        let a2 = alpha_from_dipole(2e-22, 0.0, &cav).unwrap();
        assert!((a2 / a1 - 2.0).abs() < 1e-15);
        assert_eq!(dipole_threshold(0.0, &cav).unwrap(), 0.0);
        for ac in [0.1, 0.25, 0.5] {
            let d = dipole_threshold(ac, &cav).unwrap();
            let back = alpha_from_dipole(d, 0.0, &cav).unwrap();
            assert!((back - ac).abs() <= 1e-12 * ac);
        }
    }

    #[test]
    fn alpha_invariant_under_joint_rescaling() {
        let a = alpha_from_dipole(1e-22, 0.0, &cavity(1e-3)).unwrap();
        let b = alpha_from_dipole(8e-22, 0.0, &cavity(8e-3)).unwrap();
        assert!((a - b).abs() <= 1e-15 * a);
    }

    #[test]
    fn grating_phase_profile() {
        let m = molecule(1e-29);
        let las = laser();
        assert_eq!(grating_phase(0.0, &m, &las).unwrap(), 0.0);
        let phi0 = grating_phase_amplitude(&m, &las).unwrap();
        assert!((grating_phase(las.grating_period / 2.0, &m, &las).unwrap() - phi0).abs() <= 1e-15 * phi0);
        let narrow = LaserConfig { sigma_z: las.sigma_z / 10.0, ..las };
        assert_eq!(grating_phase_amplitude(&m, &narrow).unwrap(), phi0);
    }

    #[test]
    fn suddenness_cases() {
        let mut m = molecule(1e-29);
        m.velocity = 1e-6 * C;
        assert!(suddenness_check(&m, &cavity(1e-3)).unwrap().pass);
        let short = suddenness_check(&m, &cavity(1e-5)).unwrap();
        assert!(!short.pass);
        assert!((short.size_ratio - 1e-4).abs() < 1e-18);
        m.size = 1e-30;
        assert!(suddenness_check(&m, &cavity(1e-3)).unwrap().pass);
    }

    #[test]
    fn image_charge_numbers() {
        let r = image_charge_assessment(1e-22, &cavity(1e-3), 1e-9).unwrap();
        assert!((r.charge - 1e-19).abs() < 1e-30);
        assert!((r.decoherence_time - 0.01).abs() < 1e-15);
        assert!(r.pass);
        let slow = image_charge_assessment(1e-22, &cavity(1e-3), 1e-3).unwrap();
        assert!(!slow.pass);
    }

    #[test]
    fn zero_power_gives_no_decoherence() {
        let las = LaserConfig { power: 0.0, ..laser() };
        let r = full_report(&molecule(1e-29), &las, &cavity(1e-3)).unwrap();
        assert_eq!(r.dipole, 0.0);
        assert_eq!(r.alpha, 0.0);
        assert_eq!(r.visibility_loss_proxy, 0.0);
        assert!(!r.verdicts.dipole_threshold);
    }

    #[test]
    fn transit_conventions() {
        let m = molecule(1e-29);
        let las = laser();
        let one = TransitConvention::SigmaOverV.transit_time(&las, &m);
        let two = TransitConvention::TwoSigmaOverV.transit_time(&las, &m);
        assert_eq!(two, 2.0 * one);
    }

    #[test]
    fn rejects_nonphysical_inputs() {
        let mut m = molecule(1e-29);
        m.mass = 0.0;
        assert!(full_report(&m, &laser(), &cavity(1e-3)).is_err());
        assert!(full_report(&molecule(1e-29), &laser(), &cavity(-1.0)).is_err());
    }

    #[test]
    fn sodium_cluster_report_passes() {
        let r = full_report(&molecule(1e-29), &laser(), &cavity(1e-3)).unwrap();
        assert!((r.dipole / 1e-22).log10().abs() < 3f64.log10());
        assert!(r.alpha > 0.05 && r.alpha < 0.1, "alpha = {}", r.alpha);
        assert!((r.tau - 100.0).abs() < 0.1);
        assert_eq!(r.kappa, 1e7);
        assert!(r.verdicts.all_pass(), "{:?}", r.verdicts);
        assert!(r.kernel > 0.0 && r.kernel <= 1.0);
        // far past the first resonances the loss sits near the late-time limit
        assert!((r.visibility_loss_proxy / r.late_time_loss - 1.0).abs() < 0.05);
    }

    #[test]
    fn fullerene_report_fails_threshold_by_three_decades() {
        let r = full_report(&molecule(1e-32), &laser(), &cavity(1e-3)).unwrap();
        assert!((r.dipole / 1e-25).log10().abs() < 3f64.log10());
        assert!(!r.verdicts.dipole_threshold);
        assert!(r.threshold_shortfall_decades > 2.5 && r.threshold_shortfall_decades < 4.5);
        assert!(r.verdicts.suddenness && r.verdicts.diffraction_limit && r.verdicts.image_charge);
        assert_eq!(r.rows().len(), 19);
    }
}
