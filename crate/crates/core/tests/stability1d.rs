use membrane_fsi::stability1d::{
    amplification_for, classify_stability, explicit_dt_bound, spectral_radius_semi_implicit, Model1DParams, Scheme1D,
    Stability, State1D, Stepper1D,
};
use proptest::prelude::*;

fn log_range(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn params() -> impl Strategy<Value = Model1DParams<f64>> {
    (log_range(1e-2, 1e2), log_range(1e-2, 1e2), log_range(1e-2, 1e2), log_range(1.0 / 256.0, 1.0 / 16.0), log_range(1e-4, 10.0))
        .prop_map(|(mu, k, eps, dx, dt)| Model1DParams::new(mu, k, eps, dx, dt, 32).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eigenvalues_match_product_and_sum(p in params(), theta in 0.01f64..6.27) {
        for scheme in Scheme1D::ALL {
            let amp = amplification_for(&p, scheme, theta);
            let (a, b) = (amp.alpha_theta, amp.beta_theta);
            let [l1, l2] = amp.eigenvalues(p.dt);
            // (re1 + i im1)(re2 + i im2) and the sum, checked against 1/α and (1 + α − Δt β)/α
            let prod = (l1.0 * l2.0 - l1.1 * l2.1, l1.0 * l2.1 + l1.1 * l2.0);
            let sum = (l1.0 + l2.0, l1.1 + l2.1);
            let want_sum = (1.0 + a - p.dt * b) / a;
            let scale = 1.0 + l1.0.hypot(l1.1) * l2.0.hypot(l2.1);
            prop_assert!((prod.0 - 1.0 / a).abs() <= 1e-12 * scale && prod.1.abs() <= 1e-12 * scale);
            let scale = 1.0 + l1.0.hypot(l1.1) + l2.0.hypot(l2.1) + p.dt * b / a;
            prop_assert!((sum.0 - want_sum).abs() <= 1e-12 * scale && sum.1.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn semi_implicit_radius_never_exceeds_one(p in params(), theta in 0.0f64..6.3) {
        prop_assert!(spectral_radius_semi_implicit(&p, theta) <= 1.0);
    }

    #[test]
    fn zero_augmentation_reproduces_explicit(p in params(), seed in 0u64..1000) {
        let s = State1D::single_mode(&p, 1 + (seed as usize % 15), 1e-3);
        let a = Stepper1D::with_augmentation(p, Scheme1D::SemiImplicit, 0.0).unwrap().step(&s).unwrap();
        let b = Stepper1D::new(p, Scheme1D::Explicit).unwrap().step(&s).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn marching_follows_the_explicit_bound(p in params()) {
        let bound = explicit_dt_bound(&p);
        prop_assert_eq!(classify_stability(&p.with_dt(0.7 * bound), Scheme1D::Explicit, 500).unwrap(), Stability::Stable);
        prop_assert_eq!(classify_stability(&p.with_dt(1.3 * bound), Scheme1D::Explicit, 500).unwrap(), Stability::Unstable);
    }
}
