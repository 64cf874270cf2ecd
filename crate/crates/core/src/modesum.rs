//! Brute-force quadrature of the image-sum form of the exponent.
//!
//! After the Poisson resummation over cavity modes, each image index `m`
//! contributes the radial integral
//!
//! ```text
//! I_m = ∫₀^κ q sin²(qτ/2) J(mq) dq,        Γ_m = (2α²/π) I_m
//! ```
//!
//! This module evaluates `I_m` numerically, with no reference to the
//! closed form, so the two can be checked against each other. It also
//! carries the general even-`N` switching factor and the `m = 0`
//! free-space integral.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::DimensionlessParams;
use crate::quadrature;
use crate::specfun::angular_kernel_j_unchecked;
use crate::sum::CompensatedSum;

/// Largest `κ · max(m, τ)` the oscillatory quadrature will attempt.
pub const MAX_PHASE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Minimum starting panels per full cycle of the fastest oscillation.
    pub panels_per_oscillation: usize,
    /// Relative accuracy at which the image sum over `m` is truncated.
    pub series_rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 20_000,
            panels_per_oscillation: 4,
            series_rel_tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.series_rel_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be > 0"));
        }
        if self.panels_per_oscillation < 4 {
            return Err(Error::domain(format!(
                "panels_per_oscillation must be >= 4, got {}",
                self.panels_per_oscillation
            )));
        }
        Ok(())
    }

    fn panels_for(&self, kappa: f64, fastest_rate: f64) -> usize {
        let cycles = kappa * fastest_rate / TAU;
        ((cycles * self.panels_per_oscillation as f64).ceil() as usize).max(self.panels_per_oscillation)
    }
}

fn check_feasible(kappa: f64, rate: f64) -> Result<()> {
    if kappa * rate > MAX_PHASE {
        return Err(Error::Capability(format!(
            "κ·max(m, τ) = {:e} exceeds the quadrature bound {MAX_PHASE:e}; use kernel::decoherence_kernel",
            kappa * rate
        )));
    }
    Ok(())
}

/// `I_m = ∫₀^κ q sin²(qτ/2) J(mq) dq` by adaptive Gauss–Kronrod.
pub fn radial_integral_m(m: u64, kappa: f64, tau: f64, q: &QuadratureSpec) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("radial_integral_m needs m >= 1; use m0_term for m = 0"));
    }
    if !(kappa.is_finite() && kappa > 0.0) || !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("need κ > 0 and τ >= 0, got κ = {kappa}, τ = {tau}")));
    }
    q.validate()?;
    let mf = m as f64;
    let rate = mf.max(tau);
    check_feasible(kappa, rate)?;
    if tau == 0.0 {
        return Ok(0.0);
    }
    let integrand = |x: f64| {
        let s = (0.5 * x * tau).sin();
        x * s * s * angular_kernel_j_unchecked(mf * x)
    };
    let est = quadrature::integrate(
        &integrand,
        0.0,
        kappa,
        q.panels_for(kappa, rate),
        q.rel_tol,
        q.abs_tol,
        q.max_subdivisions,
    )?;
    Ok(est.value)
}

/// Free-space (`m = 0`) integral `(4/3) ∫₀^κ q sin²(qτ/2) dq`, in closed form.
///
/// It grows like `κ²/3` and is never added into a kernel.
pub fn m0_term(kappa: f64, tau: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa > 0.0) || !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("need κ > 0 and τ >= 0, got κ = {kappa}, τ = {tau}")));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let u = kappa * tau;
    // h(u) = ∫₀ᵘ s sin²(s/2) ds = u²/4 - (u sin u + cos u - 1)/2
    let h = if u < 1.0 {
        let u2 = u * u;
        // Σ_{k≥1} (-1)^{k+1} u^{2k+2} / (2 (2k)! (2k+2))
        let mut pow_over_fact = u2 / 2.0;
        let mut acc = pow_over_fact * u2 / (2.0 * 4.0);
        for k in 2..30 {
            let kk = k as f64;
            pow_over_fact *= -u2 / ((2.0 * kk - 1.0) * (2.0 * kk));
            let t = pow_over_fact * u2 / (2.0 * (2.0 * kk + 2.0));
            acc += t;
            if t.abs() < 1e-18 * acc.abs() {
                break;
            }
        }
        acc
    } else {
        let (s, c) = u.sin_cos();
        0.25 * u * u - 0.5 * (u * s + c - 1.0)
    };
    Ok(4.0 / 3.0 * h / (tau * tau))
}

/// `|sin(Nθ) / cos θ|` for even `N`, through the finite sum
/// `sin(Nθ)/cos θ = 2 Σ_{j=1}^{N/2} (-1)^{N/2-j} sin((2j-1)θ)`.
pub fn switching_spectrum(theta: f64, n_switches: u32) -> Result<f64> {
    if n_switches < 2 || n_switches % 2 != 0 {
        return Err(Error::domain(format!(
            "the switching count must be even and >= 2, got {n_switches}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::domain("theta must be finite"));
    }
    Ok(switching_ratio(theta, n_switches).abs())
}

/// Signed `sin(Nθ)/cos θ` for even `N`.
pub(crate) fn switching_ratio(theta: f64, n_switches: u32) -> f64 {
    let half = n_switches / 2;
    let mut acc = 0.0;
    for j in 1..=half {
        let sign = if (half - j) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * ((2 * j - 1) as f64 * theta).sin();
    }
    2.0 * acc
}

/// Per-`m` breakdown of a general-`N` exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralExponent {
    pub gamma: f64,
    /// `(m, contribution of ±m)` for `m = 1..=M`.
    pub per_m: Vec<(u64, f64)>,
}

/// `Γ⁽ᴺ⁾ = (α²/π) Σ_{m≠0} ∫₀^κ q (1/4) F_N(qτ/2) J(mq) dq` with
/// `F_N(θ) = sin²(Nθ)/cos²θ`.
pub fn exponent_general_n(p: &DimensionlessParams, q: &QuadratureSpec) -> Result<f64> {
    exponent_general_n_detailed(p, q).map(|g| g.gamma)
}

/// As [`exponent_general_n`], keeping each `±m` pair's contribution.
///
/// The image sum stops once, for two consecutive `m`, the tail estimate
/// `|Γ_m| m / 2` falls below `q.abs_tol` or `q.series_rel_tol` times the partial sum.
pub fn exponent_general_n_detailed(p: &DimensionlessParams, q: &QuadratureSpec) -> Result<GeneralExponent> {
    p.validate()?;
    q.validate()?;
    let prefactor = p.alpha * p.alpha / PI;
    let mut per_m = Vec::new();
    if p.tau == 0.0 || p.alpha == 0.0 {
        return Ok(GeneralExponent { gamma: 0.0, per_m });
    }
    // fastest oscillation in q: the switching factor's harmonics reach (N-1)τ
    let switch_rate = (p.n_switches - 1) as f64 * p.tau;

    // evaluate in batches so that each m's quadrature can run concurrently
    const BATCH: u64 = 16;
    let mut next = 1u64;
    let mut small_in_a_row = 0;
    let mut partial = CompensatedSum::new();
    loop {
        let batch: Vec<u64> = (next..next + BATCH).collect();
        let values: Vec<Result<f64>> = batch
            .par_iter()
            .map(|&m| {
                let mf = m as f64;
                let rate = mf.max(switch_rate);
                check_feasible(p.kappa, rate)?;
                let n = p.n_switches;
                let tau = p.tau;
                let integrand = |x: f64| {
                    let r = switching_ratio(0.5 * x * tau, n);
                    x * 0.25 * r * r * angular_kernel_j_unchecked(mf * x)
                };
                let est = quadrature::integrate(
                    &integrand,
                    0.0,
                    p.kappa,
                    q.panels_for(p.kappa, rate),
                    q.rel_tol,
                    q.abs_tol / (2.0 * prefactor),
                    q.max_subdivisions,
                )?;
                // ±m give equal contributions since J is even
                Ok(2.0 * prefactor * est.value)
            })
            .collect();
        for (m, v) in batch.into_iter().zip(values) {
            let v = v?;
            per_m.push((m, v));
            partial.add(v);
            // contributions fall at least like m⁻³, so the rest is ≲ |v| m / 2
            let tail = 0.5 * v.abs() * m as f64;
            if tail < q.abs_tol.max(q.series_rel_tol * partial.value().abs()) {
                small_in_a_row += 1;
                if small_in_a_row >= 2 {
                    return Ok(GeneralExponent { gamma: partial.value(), per_m });
                }
            } else {
                small_in_a_row = 0;
            }
        }
        next += BATCH;
    }
}

/// Total exponent including the free-space `m = 0` integral,
/// `(α²/π) Σ_m ∫₀^κ q (1/4) F_N(qτ/2) J(mq) dq`.
///
/// This is what a direct mode sum over the cavity measures. It depends on
/// `κ` like `κ²` through the `m = 0` part, so it is only meaningful at a
/// fixed, explicit cutoff.
pub fn full_exponent(p: &DimensionlessParams, q: &QuadratureSpec) -> Result<f64> {
    let images = exponent_general_n(p, q)?;
    if p.tau == 0.0 || p.alpha == 0.0 {
        return Ok(0.0);
    }
    let prefactor = p.alpha * p.alpha / PI;
    let free = if p.n_switches == 2 {
        m0_term(p.kappa, p.tau)?
    } else {
        let rate = (p.n_switches - 1) as f64 * p.tau;
        check_feasible(p.kappa, rate)?;
        let (n, tau) = (p.n_switches, p.tau);
        let integrand = |x: f64| {
            let r = switching_ratio(0.5 * x * tau, n);
            x * 0.25 * r * r * (4.0 / 3.0)
        };
        quadrature::integrate(
            &integrand,
            0.0,
            p.kappa,
            q.panels_for(p.kappa, rate),
            q.rel_tol,
            q.abs_tol / prefactor,
            q.max_subdivisions,
        )?
        .value
    };
    Ok(prefactor * free + images)
}
