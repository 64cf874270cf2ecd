//! Discrete-mode simulator for the field between the plates.
//!
//! Each cavity mode `(n, k∥)` ends up in a coherent state once the dipole
//! has been switched on and off. The amplitude for a dipole `d` near the
//! centre, in the dipole approximation, is
//!
//! ```text
//! α = d f(n) k∥ c cos(nπ/2) / (2π sqrt(ω³ ħ ε₀ L)) · sin(NωT/2)/cos(ωT/2) · e^{-iφ},
//! φ = π + (N+1) ωT/2,   ω² = c² (k∥² + n²π²/L²),   f(0) = 1/√2, f(n>0) = 1
//! ```
//!
//! with `cos(nπ/2)` replaced by `1` at `x = -L/2` and `(-1)ⁿ` at `x = +L/2`.
//! The overlap of two such product states is `exp(-½ Σ |α_a - α_b|²)`, the
//! mode sum running over `n ≥ 0` and `∫ d²k∥ = ∫ 2π k∥ dk∥`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::constants::{C, EPSILON_0, HBAR};
use crate::error::{Error, Result};
use crate::modesum::switching_ratio;
use crate::sum::CompensatedSum;

/// Largest number of points per grid axis.
pub const MAX_GRID_POINTS: usize = 1 << 16;

/// Integer modes `n = 0..=n_max` crossed with a uniform `k∥` grid on
/// `[0, k_par_max]`. `k_par_max` doubles as the spherical cutoff `k_max`:
/// modes with `k∥² + (nπ/L)² > k_max²` are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    n_max: u32,
    k_par_max: f64,
    k_par_points: usize,
    plate_separation: f64,
}

impl ModeGrid {
    pub fn new(n_max: u32, k_par_max: f64, k_par_points: usize, plate_separation: f64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::domain("n_max must be >= 1"));
        }
        if k_par_points < 2 {
            return Err(Error::domain("k_par_points must be >= 2"));
        }
        if !(k_par_max.is_finite() && k_par_max > 0.0) {
            return Err(Error::domain(format!("k_par_max must be > 0, got {k_par_max}")));
        }
        if !(plate_separation.is_finite() && plate_separation > 0.0) {
            return Err(Error::domain(format!("plate separation must be > 0, got {plate_separation}")));
        }
        if n_max as usize > MAX_GRID_POINTS || k_par_points > MAX_GRID_POINTS {
            return Err(Error::Capability(format!(
                "grid {n_max} x {k_par_points} exceeds {MAX_GRID_POINTS} points per axis"
            )));
        }
        Ok(Self {
            n_max,
            k_par_max,
            k_par_points,
            plate_separation,
        })
    }

    /// A `size × size` grid whose cutoff corresponds to `κ = k_max L`.
    pub fn square(size: usize, kappa: f64, plate_separation: f64) -> Result<Self> {
        let n_max = u32::try_from(size).map_err(|_| Error::Capability(format!("grid size {size} too large")))?;
        Self::new(n_max, kappa / plate_separation, size, plate_separation)
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn k_par_max(&self) -> f64 {
        self.k_par_max
    }

    pub fn k_par_points(&self) -> usize {
        self.k_par_points
    }

    pub fn plate_separation(&self) -> f64 {
        self.plate_separation
    }

    pub fn kappa(&self) -> f64 {
        self.k_par_max * self.plate_separation
    }

    pub fn k_par_step(&self) -> f64 {
        self.k_par_max / (self.k_par_points - 1) as f64
    }

    /// `k_x = nπ/L` of mode `n`.
    pub fn k_normal(&self, n: u32) -> f64 {
        n as f64 * PI / self.plate_separation
    }

    /// Largest `k∥` inside the spherical cutoff for mode `n`, if any.
    pub fn k_par_cutoff(&self, n: u32) -> Option<f64> {
        let kn = self.k_normal(n);
        (kn <= self.k_par_max).then(|| (self.k_par_max * self.k_par_max - kn * kn).max(0.0).sqrt())
    }

    fn contains(&self, n: u32, k_par: f64) -> bool {
        n <= self.n_max && k_par >= 0.0 && self.k_par_cutoff(n).is_some_and(|kc| k_par <= kc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// Near `x = 0`, dipole approximation.
    Center,
    /// At `x = -L/2`.
    LeftPlate,
    /// At `x = +L/2`.
    RightPlate,
}

impl Position {
    fn is_plate(self) -> bool {
        matches!(self, Position::LeftPlate | Position::RightPlate)
    }

    /// Spatial mode factor at this position.
    fn mode_factor(self, n: u32) -> f64 {
        match self {
            // cos(nπ/2): 1, 0, -1, 0, ...
            Position::Center => match n % 4 {
                0 => 1.0,
                2 => -1.0,
                _ => 0.0,
            },
            Position::LeftPlate => 1.0,
            Position::RightPlate => {
                if n % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Where the particle sits and the dipole it carries while switched on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleProfile {
    pub position: Position,
    /// Dipole moment along `x`, C·m.
    pub d: f64,
}

impl DipoleProfile {
    pub fn center(d: f64) -> Self {
        Self {
            position: Position::Center,
            d,
        }
    }

    pub fn left_plate(d: f64) -> Self {
        Self {
            position: Position::LeftPlate,
            d,
        }
    }

    pub fn right_plate(d: f64) -> Self {
        Self {
            position: Position::RightPlate,
            d,
        }
    }
}

/// Displacement of one mode, `modulus · e^{i phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude {
    pub modulus: f64,
    /// Radians in `[0, 2π)`.
    pub phase: f64,
    pub n: u32,
    pub k_par: f64,
}

impl CoherentAmplitude {
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }
}

fn mode_weight(n: u32) -> f64 {
    if n == 0 {
        FRAC_1_SQRT_2
    } else {
        1.0
    }
}

/// Real signed amplitude and the common phase `φ`.
fn signed_amplitude(n: u32, k_par: f64, profile: &DipoleProfile, t: f64, n_switches: u32, l: f64) -> (f64, f64) {
    let kn = n as f64 * PI / l;
    let omega = C * (k_par * k_par + kn * kn).sqrt();
    let half = 0.5 * omega * t;
    let phi = PI + (n_switches + 1) as f64 * half;
    if k_par == 0.0 {
        return (0.0, phi);
    }
    let prefactor = profile.d * mode_weight(n) * k_par * C * profile.position.mode_factor(n)
        / (TAU * (omega.powi(3) * HBAR * EPSILON_0 * l).sqrt());
    (prefactor * switching_ratio(half, n_switches), phi)
}

fn check_switches(n_switches: u32) -> Result<()> {
    if n_switches < 2 || n_switches % 2 != 0 {
        return Err(Error::domain(format!(
            "the switching count must be even and >= 2, got {n_switches}"
        )));
    }
    Ok(())
}

/// Coherent amplitude of mode `(n, k∥)` after `N` switches spaced by `t`.
pub fn amplitude(
    n: u32,
    k_par: f64,
    profile: &DipoleProfile,
    t: f64,
    n_switches: u32,
    grid: &ModeGrid,
) -> Result<CoherentAmplitude> {
    check_switches(n_switches)?;
    if !grid.contains(n, k_par) {
        return Err(Error::domain(format!("mode (n = {n}, k∥ = {k_par:e}) is not on the grid")));
    }
    if !(t.is_finite() && t >= 0.0) || !profile.d.is_finite() {
        return Err(Error::domain("switching time and dipole must be finite, time >= 0"));
    }
    let (signed, phi) = signed_amplitude(n, k_par, profile, t, n_switches, grid.plate_separation);
    let phase = if signed < 0.0 { phi + PI } else { phi };
    Ok(CoherentAmplitude {
        modulus: signed.abs(),
        phase: phase.rem_euclid(TAU),
        n,
        k_par,
    })
}

fn check_compatible(a: &DipoleProfile, b: &DipoleProfile) -> Result<()> {
    if a.position.is_plate() != b.position.is_plate() {
        return Err(Error::domain(
            "overlap needs both profiles at the centre or both at the plates",
        ));
    }
    if !(a.d.is_finite() && b.d.is_finite()) {
        return Err(Error::domain("dipole moments must be finite"));
    }
    Ok(())
}

/// `½ Σ_modes |α_a - α_b|²` on the grid, i.e. `-ln` of the overlap.
///
/// Each `n` is integrated over `k∥` with the trapezoidal rule on the
/// uniform grid, closed by one partial cell ending exactly on the cutoff.
pub fn overlap_exponent(
    profile_a: &DipoleProfile,
    profile_b: &DipoleProfile,
    t: f64,
    n_switches: u32,
    grid: &ModeGrid,
) -> Result<f64> {
    check_switches(n_switches)?;
    check_compatible(profile_a, profile_b)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("switching time must be >= 0, got {t}")));
    }
    let l = grid.plate_separation;
    let h = grid.k_par_step();
    let density = |n: u32, k: f64| -> f64 {
        let (sa, phi) = signed_amplitude(n, k, profile_a, t, n_switches, l);
        let (sb, _) = signed_amplitude(n, k, profile_b, t, n_switches, l);
        let rot = Complex64::from_polar(1.0, -phi);
        let diff = (rot * sa - rot * sb).norm_sqr();
        0.5 * diff * TAU * k
    };

    let per_n: Vec<f64> = (0..=grid.n_max)
        .into_par_iter()
        .map(|n| {
            let Some(k_cut) = grid.k_par_cutoff(n) else {
                return 0.0;
            };
            let last = ((k_cut / h).floor() as usize).min(grid.k_par_points - 1);
            let mut acc = CompensatedSum::new();
            let mut prev = density(n, 0.0);
            for j in 1..=last {
                let cur = density(n, j as f64 * h);
                acc.add(0.5 * h * (prev + cur));
                prev = cur;
            }
            let k_last = last as f64 * h;
            if k_cut > k_last {
                acc.add(0.5 * (k_cut - k_last) * (prev + density(n, k_cut)));
            }
            acc.value()
        })
        .collect();
    Ok(per_n.into_iter().collect::<CompensatedSum>().value())
}

/// Overlap `|⟨E_b|E_a⟩| = exp(-½ Σ |α_a - α_b|²)` on the grid.
pub fn overlap(
    profile_a: &DipoleProfile,
    profile_b: &DipoleProfile,
    t: f64,
    n_switches: u32,
    grid: &ModeGrid,
) -> Result<f64> {
    overlap_exponent(profile_a, profile_b, t, n_switches, grid).map(|g| (-g).exp())
}
