use proptest::prelude::*;

use vdl_core::kernel::{decoherence_kernel, kernel_no_cutoff_dimensionless, DimensionlessParams};
use vdl_core::specfun::{angular_kernel_j, ci, cin, EULER_GAMMA};
use vdl_core::SeriesPolicy;

fn gamma(alpha: f64, kappa: f64, tau: f64) -> f64 {
    let p = DimensionlessParams::new(alpha, kappa, tau).unwrap();
    decoherence_kernel(&p, &SeriesPolicy::default()).unwrap().gamma
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_scales_with_alpha_squared(
        alpha in 1e-3f64..1.0,
        c in 0.1f64..10.0,
        kappa in 10.0f64..1e6,
        tau in 0.0f64..6.0,
    ) {
        let base = gamma(alpha, kappa, tau);
        let scaled = gamma(c * alpha, kappa, tau);
        prop_assert!((scaled - c * c * base).abs() <= 1e-13 * scaled.abs().max(1e-300));
    }

    #[test]
    fn kernel_is_contractive_off_resonance(
        kappa in 10.0f64..1e8,
        tau in 0.0f64..8.0,
    ) {
        let p = DimensionlessParams::new(0.5, kappa, tau).unwrap();
        let r = decoherence_kernel(&p, &SeriesPolicy::default()).unwrap();
        prop_assert!(r.kernel > 0.0 && r.kernel <= 1.0, "D = {} at κ = {kappa}, τ = {tau}", r.kernel);
        prop_assert!(r.is_contractive());
    }

    #[test]
    fn cin_is_nondecreasing(x in 0.0f64..60.0, dx in 1e-6f64..1.0) {
        prop_assert!(cin(x + dx).unwrap() >= cin(x).unwrap() - 1e-15);
    }

    #[test]
    fn ci_and_cin_are_consistent(x in 1e-6f64..1e4) {
        let lhs = ci(x).unwrap() + cin(x).unwrap();
        prop_assert!((lhs - EULER_GAMMA - x.ln()).abs() <= 1e-10);
    }

    #[test]
    fn angular_kernel_matches_its_integral(x in 0.02f64..40.0) {
        // ∫₋₁¹ (1 - u²) cos(xu) du by composite Simpson on 2000 panels
        let n = 2000;
        let h = 2.0 / n as f64;
        let f = |u: f64| (1.0 - u * u) * (x * u).cos();
        let mut acc = f(-1.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(-1.0 + i as f64 * h);
        }
        let integral = acc * h / 3.0;
        prop_assert!((angular_kernel_j(x).unwrap() - integral).abs() <= 1e-8);
    }

    #[test]
    fn no_cutoff_series_is_nonnegative(alpha in 0.0f64..1.0, tau in 0.01f64..30.0) {
        prop_assume!((tau - tau.round()).abs() > 1e-6);
        let r = kernel_no_cutoff_dimensionless(alpha, tau, 1_000_000).unwrap();
        prop_assert!(r.gamma >= 0.0);
    }
}
