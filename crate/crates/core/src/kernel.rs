//! Closed-form decoherence exponent for a single on/off switching cycle.
//!
//! With `α` the dimensionless dipole coupling, `κ = k_max L` the cutoff and
//! `τ = cT/L` the switched-on duration, the kernel is `D = exp(-Γ)` with
//!
//! ```text
//! Γ   = Σ_{m≥1} Γ_m
//! Γ_m = 2α²/(π m³) · ( τ [ln|(m+τ)/(m-τ)| + Ci(κ|m-τ|) - Ci(κ(m+τ))]
//!                      - 4 sin²(κτ/2) sin(mκ) / κ )
//! ```
//!
//! The index `m` counts image pairs at separation `mL`; the `m = 0`
//! free-space piece is never part of `Γ` (see [`crate::modesum::m0_term`]).
//!
//! At `τ = m` the logarithm and `Ci(κ|m-τ|)` diverge with opposite signs.
//! Writing `Ci(y) = γ + ln y - Cin(y)` with the entire function `Cin` gives
//! the bracket as `ln(κ(m+τ)) + γ - Cin(κ|m-τ|) - Ci(κ(m+τ))`, which is
//! finite at the resonance.

use std::f64::consts::PI;

use crate::constants;
use crate::error::{Error, Result};
use crate::specfun::{ci_unchecked, cin_unchecked, CI_BRANCH_SWITCH, EULER_GAMMA};
use crate::sum::CompensatedSum;

/// The parameters that fully determine the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub alpha: f64,
    pub kappa: f64,
    pub tau: f64,
    /// Total number of switching events; even.
    pub n_switches: u32,
}

impl DimensionlessParams {
    /// One on/off cycle (`N = 2`).
    pub fn new(alpha: f64, kappa: f64, tau: f64) -> Result<Self> {
        Self::with_switches(alpha, kappa, tau, 2)
    }

    pub fn with_switches(alpha: f64, kappa: f64, tau: f64, n_switches: u32) -> Result<Self> {
        let p = Self {
            alpha,
            kappa,
            tau,
            n_switches,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::domain(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::domain(format!("kappa must be finite and > 0, got {}", self.kappa)));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::domain(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        if self.n_switches < 2 || self.n_switches % 2 != 0 {
            return Err(Error::domain(format!(
                "the number of switches must be even and >= 2 (the dipole has to end switched off), got {}",
                self.n_switches
            )));
        }
        Ok(())
    }

    fn require_single_cycle(&self) -> Result<()> {
        if self.n_switches != 2 {
            return Err(Error::Precondition(format!(
                "the closed form covers N = 2 only, got N = {}; use modesum::exponent_general_n",
                self.n_switches
            )));
        }
        Ok(())
    }
}

/// Truncation control for the image series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Stop once the analytic tail bound on `Γ/α²` drops below this.
    ///
    /// Measuring the tail in units of `α²` keeps the number of summed terms
    /// independent of `α`, so `Γ` scales exactly like `α²`.
    pub tail_bound: f64,
    /// Lower bound on the number of terms; raised to `ceil(τ) + 10` when
    /// evaluating so the resonance at `m ≈ τ` is never cut off.
    pub min_terms: u64,
    pub max_terms: u64,
    /// For `|m - τ|` below this the `Cin` form is always used.
    pub resonance_width: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            tail_bound: 1e-12,
            min_terms: 10,
            max_terms: 1_000_000,
            resonance_width: 1e-3,
        }
    }
}

impl SeriesPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_bound > 0.0) {
            return Err(Error::domain(format!("tail_bound must be > 0, got {}", self.tail_bound)));
        }
        if self.max_terms < self.min_terms {
            return Err(Error::domain(format!(
                "max_terms ({}) must be >= min_terms ({})",
                self.max_terms, self.min_terms
            )));
        }
        if !(self.resonance_width >= 0.0) {
            return Err(Error::domain("resonance_width must be >= 0"));
        }
        Ok(())
    }

    /// The number of terms that must be summed before the tail test applies.
    pub fn effective_min_terms(&self, tau: f64) -> u64 {
        self.min_terms.max(tau.ceil() as u64 + 10)
    }
}

/// Outcome of a kernel evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceResult {
    /// The exponent `Γ` in `D = exp(-Γ)`.
    pub gamma: f64,
    /// `D = exp(-Γ)`.
    pub kernel: f64,
    pub terms_used: u64,
    /// `(m, Γ_m)` for every summed term, in order.
    pub per_term: Vec<(u64, f64)>,
    /// Upper estimate of the neglected tail `Σ_{m>M} |Γ_m|`.
    pub truncation_estimate: f64,
}

impl DecoherenceResult {
    fn from_terms(per_term: Vec<(u64, f64)>, truncation_estimate: f64) -> Self {
        let gamma = per_term.iter().map(|&(_, g)| g).collect::<CompensatedSum>().value();
        Self {
            gamma,
            kernel: (-gamma).exp(),
            terms_used: per_term.len() as u64,
            per_term,
            truncation_estimate,
        }
    }

    /// Visibility-loss proxy `1 - D`.
    pub fn visibility_loss(&self) -> f64 {
        1.0 - self.kernel
    }

    /// Whether `D` lies in `(0, 1]`, i.e. the image sum alone did not
    /// produce net coherence gain.
    pub fn is_contractive(&self) -> bool {
        self.kernel > 0.0 && self.gamma >= 0.0
    }
}

/// The `m`-th summand `Γ_m` of the exponent.
pub fn kernel_term(m: u64, p: &DimensionlessParams) -> Result<f64> {
    kernel_term_with_width(m, p, SeriesPolicy::default().resonance_width)
}

/// As [`kernel_term`], with an explicit width around `τ = m` inside which the
/// `Cin` form is mandatory.
pub fn kernel_term_with_width(m: u64, p: &DimensionlessParams, resonance_width: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::domain("kernel terms start at m = 1; m = 0 is the free-space term"));
    }
    p.validate()?;
    p.require_single_cycle()?;
    let g = term(m, p, resonance_width);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::Overflow { m })
    }
}

fn term(m: u64, p: &DimensionlessParams, resonance_width: f64) -> f64 {
    let mf = m as f64;
    let (kappa, tau) = (p.kappa, p.tau);
    let gap = (mf - tau).abs();
    let sum_arg = kappa * (mf + tau);
    let log_part = if gap < resonance_width || kappa * gap <= CI_BRANCH_SWITCH {
        sum_arg.ln() + EULER_GAMMA - cin_unchecked(kappa * gap) - ci_unchecked(sum_arg)
    } else {
        let ratio = if mf > tau {
            (2.0 * tau / (mf - tau)).ln_1p()
        } else {
            (2.0 * mf / (tau - mf)).ln_1p()
        };
        ratio + ci_unchecked(kappa * gap) - ci_unchecked(sum_arg)
    };
    let half_phase = (0.5 * kappa * tau).sin();
    let switching = 4.0 * half_phase * half_phase * (mf * kappa).sin() / kappa;
    2.0 * p.alpha * p.alpha / (PI * mf * mf * mf) * (tau * log_part - switching)
}

/// Bound on `Σ_{m>M} |Γ_m| / α²` for `M + 1 > τ`.
fn tail_bound_after(m_last: u64, p: &DimensionlessParams) -> f64 {
    let mf = m_last as f64;
    let gap = mf + 1.0 - p.tau;
    debug_assert!(gap > 0.0);
    let cube_tail = 1.0 / (2.0 * mf * mf);
    let log_part = 2.0 * p.tau * p.tau / gap;
    let ci_part = 4.0 * p.tau / (p.kappa * gap);
    let switching = 4.0 / p.kappa;
    2.0 / PI * cube_tail * (log_part + ci_part + switching)
}

/// Sum the image series until the tail bound is met.
pub fn decoherence_kernel(p: &DimensionlessParams, policy: &SeriesPolicy) -> Result<DecoherenceResult> {
    p.validate()?;
    p.require_single_cycle()?;
    policy.validate()?;

    let min_terms = policy.effective_min_terms(p.tau);
    let mut per_term = Vec::with_capacity(min_terms as usize * 4);
    let mut tail = f64::INFINITY;
    for m in 1..=policy.max_terms {
        let g = term(m, p, policy.resonance_width);
        if !g.is_finite() {
            return Err(Error::Overflow { m });
        }
        per_term.push((m, g));
        if m >= min_terms {
            let unit_tail = tail_bound_after(m, p);
            tail = p.alpha * p.alpha * unit_tail;
            if unit_tail < policy.tail_bound {
                return Ok(DecoherenceResult::from_terms(per_term, tail));
            }
        }
    }
    let partial = DecoherenceResult::from_terms(per_term, tail);
    Err(Error::NonConvergence {
        terms: partial.terms_used,
        partial_gamma: partial.gamma,
        tail_estimate: tail,
    })
}

/// The cutoff-free series `Γ = Σ 2α²τ/(π m³) · ln|(m+τ)/(m-τ)|` from SI
/// inputs: plate separation `l` (m) and switched-on time `t` (s).
pub fn kernel_no_cutoff(alpha: f64, l: f64, t: f64, max_terms: u64) -> Result<DecoherenceResult> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::domain(format!("plate separation must be > 0, got {l}")));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("switching time must be >= 0, got {t}")));
    }
    kernel_no_cutoff_dimensionless(alpha, constants::C * t / l, max_terms)
}

/// [`kernel_no_cutoff`] in terms of `τ` directly.
pub fn kernel_no_cutoff_dimensionless(alpha: f64, tau: f64, max_terms: u64) -> Result<DecoherenceResult> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::domain(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("tau must be finite and >= 0, got {tau}")));
    }
    if max_terms == 0 {
        return Err(Error::domain("max_terms must be >= 1"));
    }
    if tau >= 1.0 && tau.fract() == 0.0 && tau <= max_terms as f64 {
        return Err(Error::domain(format!(
            "tau = {tau} is an integer: the series diverges logarithmically without a cutoff"
        )));
    }

    let prefactor = 2.0 * alpha * alpha * tau / PI;
    let min_terms = (tau.ceil() as u64 + 10).min(max_terms);
    let tail_target = SeriesPolicy::default().tail_bound;
    let mut per_term = Vec::new();
    let mut tail = f64::INFINITY;
    for m in 1..=max_terms {
        let mf = m as f64;
        let log_ratio = if mf > tau {
            (2.0 * tau / (mf - tau)).ln_1p()
        } else {
            (2.0 * mf / (tau - mf)).ln_1p()
        };
        per_term.push((m, prefactor * log_ratio / (mf * mf * mf)));
        if m >= min_terms && mf + 1.0 > tau {
            // ln(1 + 2τ/(m-τ)) ≤ 2τ/(m-τ), Σ_{m>M} m⁻³ ≤ 1/(2M²)
            let unit_tail = 2.0 * tau / PI * 2.0 * tau / (mf + 1.0 - tau) / (2.0 * mf * mf);
            tail = alpha * alpha * unit_tail;
            if unit_tail < tail_target {
                break;
            }
        }
    }
    Ok(DecoherenceResult::from_terms(per_term, tail))
}

/// Kernel for a superposition straddling the plates at `x = ±L/2`.
///
/// Only the antisymmetric profile `d(-L/2) = -d(L/2)` reduces to the
/// closed form; then `(d(x') - d(x))²` is replaced by `(d_right - d_left)²`.
pub fn kernel_at_plates(d_left: f64, d_right: f64, l: f64, kappa: f64, tau: f64) -> Result<DecoherenceResult> {
    if !(d_left.is_finite() && d_right.is_finite()) {
        return Err(Error::domain("dipole moments must be finite"));
    }
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::domain(format!("plate separation must be > 0, got {l}")));
    }
    let spread = (d_right - d_left).abs();
    if (d_left + d_right).abs() > 1e-9 * spread {
        return Err(Error::Precondition(format!(
            "plate kernel needs d_left = -d_right, got d_left = {d_left:e}, d_right = {d_right:e}"
        )));
    }
    let alpha = spread / (l * constants::dipole_scale());
    let p = DimensionlessParams::new(alpha, kappa, tau)?;
    decoherence_kernel(&p, &SeriesPolicy::default())
}
