//! Special functions used by the kernel series.
//!
//! * `Cin(x) = ∫₀ˣ (1 - cos t)/t dt`, entire, with `Ci(x) = γ + ln x - Cin(x)`.
//! * `Ci(x)`, the cosine integral.
//! * `J(x) = ∫₋₁¹ (1 - u²) e^{ixu} du = 4 (sin x - x cos x) / x³`.
//!
//! `Cin` is summed from its power series for `x ≤ 4`. Above the switch `Ci`
//! is written as `f(x) sin x - g(x) cos x`, with the auxiliary functions
//! `f`, `g` taken from the continued fraction of `e^{ix} E₁(ix)` (modified
//! Lentz), which converges in a handful of steps at large `x`.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// Below this argument `Cin` is summed directly, above it `Ci` comes from
/// the auxiliary functions.
pub const CI_BRANCH_SWITCH: f64 = 4.0;

/// Below this `|x|` the angular kernel uses its Taylor expansion.
pub const J_TAYLOR_SWITCH: f64 = 1e-2;

const CF_MAX_ITER: usize = 1000;
const CF_TINY: f64 = 1e-300;

/// Target accuracy of a truncated power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalAccuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-18,
            max_terms: 60,
        }
    }
}

impl EvalAccuracy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_terms < 1 {
            return Err(Error::domain(format!(
                "accuracy needs abs_tol > 0 and max_terms >= 1, got {abs_tol:e}, {max_terms}"
            )));
        }
        Ok(Self { abs_tol, max_terms })
    }
}

/// `Cin(x) = Σ_{k≥1} (-1)^{k+1} x^{2k} / (2k (2k)!)`, valid for `x ≥ 0`.
pub fn cin(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("cin requires finite x >= 0, got {x}")));
    }
    Ok(cin_unchecked(x))
}

/// Power series for `Cin` with an explicit accuracy target.
///
/// Any finite `x ≥ 0` is accepted, but cancellation makes the result
/// useless well before `x ≈ 20`; the public [`cin`] switches branches at 4.
pub fn cin_series(x: f64, accuracy: EvalAccuracy) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("cin requires finite x >= 0, got {x}")));
    }
    Ok(cin_power_series(x, accuracy))
}

/// Cosine integral `Ci(x) = -∫ₓ^∞ cos t / t dt` for `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("ci requires finite x > 0, got {x}")));
    }
    Ok(ci_unchecked(x))
}

/// `J(x) = 4 (sin x - x cos x) / x³`; even, with `J(0) = 4/3`.
pub fn angular_kernel_j(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("angular kernel requires finite x, got {x}")));
    }
    Ok(angular_kernel_j_unchecked(x))
}

pub(crate) fn cin_unchecked(x: f64) -> f64 {
    if x <= CI_BRANCH_SWITCH {
        cin_power_series(x, EvalAccuracy::default())
    } else {
        EULER_GAMMA + x.ln() - ci_auxiliary(x)
    }
}

pub(crate) fn ci_unchecked(x: f64) -> f64 {
    if x <= CI_BRANCH_SWITCH {
        EULER_GAMMA + x.ln() - cin_power_series(x, EvalAccuracy::default())
    } else {
        ci_auxiliary(x)
    }
}

pub(crate) fn angular_kernel_j_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    if ax < J_TAYLOR_SWITCH {
        let x2 = ax * ax;
        // 4/3 - 2x²/15 + x⁴/210 - x⁶/11340
        4.0 / 3.0 + x2 * (-2.0 / 15.0 + x2 * (1.0 / 210.0 - x2 / 11340.0))
    } else {
        let (s, c) = ax.sin_cos();
        4.0 * (s - ax * c) / (ax * ax * ax)
    }
}

fn cin_power_series(x: f64, accuracy: EvalAccuracy) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    // term_k = (-1)^{k+1} x^{2k} / (2k)!, the series weight is 1/(2k)
    let mut term = x2 / 2.0;
    let mut sum = term / 2.0;
    for k in 2..=accuracy.max_terms {
        let kk = k as f64;
        term *= -x2 / ((2.0 * kk - 1.0) * (2.0 * kk));
        let contrib = term / (2.0 * kk);
        sum += contrib;
        if contrib.abs() < accuracy.abs_tol {
            break;
        }
    }
    sum
}

/// Returns `(f, g)` such that `Ci(x) = f sin x - g cos x`.
pub fn auxiliary_fg(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("auxiliary functions need x > 0, got {x}")));
    }
    Ok(auxiliary_fg_cf(x))
}

// Continued fraction for h = e^{ix} E₁(ix) = g(x) - i f(x):
//   E₁(z) e^z = 1/(z+1 - 1²/(z+3 - 2²/(z+5 - ...)))
fn auxiliary_fg_cf(x: f64) -> (f64, f64) {
    // complex arithmetic written out to keep this module dependency-free
    let mut b = (1.0, x);
    let mut c = (1.0 / CF_TINY, 0.0);
    let mut d = cinv(b);
    let mut h = d;
    for i in 2..=CF_MAX_ITER {
        let a = -((i - 1) as f64).powi(2);
        b.0 += 2.0;
        d = cinv(cadd(cscale(d, a), b));
        c = cadd(b, cscale(cinv(c), a));
        let del = cmul(c, d);
        h = cmul(h, del);
        if (del.0 - 1.0).abs() + del.1.abs() < f64::EPSILON {
            break;
        }
    }
    (-h.1, h.0)
}

fn ci_auxiliary(x: f64) -> f64 {
    let (f, g) = auxiliary_fg_cf(x);
    let (s, c) = x.sin_cos();
    f * s - g * c
}

fn cadd(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn cscale(a: (f64, f64), s: f64) -> (f64, f64) {
    (a.0 * s, a.1 * s)
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cinv(a: (f64, f64)) -> (f64, f64) {
    // scaled to avoid overflow when |a| is huge
    if a.0.abs() >= a.1.abs() {
        let r = a.1 / a.0;
        let den = a.0 + a.1 * r;
        (1.0 / den, -r / den)
    } else {
        let r = a.0 / a.1;
        let den = a.0 * r + a.1;
        (r / den, -1.0 / den)
    }
}
