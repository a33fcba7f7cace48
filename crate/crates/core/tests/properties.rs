use ck_tcs::cli::{RunConfig, StateArg};
use ck_tcs::dynamics::phase_state;
use ck_tcs::kernel::{kernel_c, kernel_s};
use ck_tcs::states::{fock_tcs, PolyGaussian};
use ck_tcs::verify::commutator_gap;
use ck_tcs::OscParams;
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = OscParams> {
    (0.5..2.0f64, 0.0..4.0f64, 0.5..2.0f64, 0.5..2.0f64, -1.0..1.0f64, 0.2..3.0f64, -2.0..2.0f64, -2.0..2.0f64)
        .prop_map(|(m, g, w0, h, br, bi, x0, p0)| OscParams::new(m, g, w0, h, Complex64::new(br, bi), x0, p0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kernel_identity(omega_sq in -4.0..4.0f64, t in 0.0..10.0f64) {
        let (c, s) = (kernel_c(omega_sq, t), kernel_s(omega_sq, t));
        let gap = (c * c + omega_sq * s * s - 1.0).abs() / (c * c).max(1.0);
        prop_assert!(gap < 1e-12, "gap {gap}");
    }

    #[test]
    fn skew_product_is_conserved(p in params(), t in 0.0..8.0f64) {
        let s = phase_state(&p, t).unwrap();
        let gap = (s.skew_product() + Complex64::new(0.0, 2.0 * p.b().im)).norm();
        prop_assert!(gap / (s.z.norm() * s.w.norm()).max(1.0) < 1e-10);
    }

    #[test]
    fn ladder_commutator_is_identity(
        p in params(),
        t in 0.0..5.0f64,
        coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..8),
    ) {
        let coeffs = coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let state = PolyGaussian::from_parts(p, phase_state(&p, t).unwrap(), coeffs);
        prop_assert!(commutator_gap(&state, false) < 1e-12);
    }

    #[test]
    fn fock_states_are_orthonormal(p in params(), t in 0.0..5.0f64) {
        let states: Vec<_> = (0..=4).map(|n| fock_tcs(&p, n, t).unwrap()).collect();
        for (m, a) in states.iter().enumerate() {
            for (n, b) in states.iter().enumerate() {
                let target = if m == n { 1.0 } else { 0.0 };
                prop_assert!((a.inner(b).unwrap() - target).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn config_text_round_trips(
        gamma in 0.0..5.0f64,
        b_re in -2.0..2.0f64,
        x0 in -1e3..1e3f64,
        t1 in 0.0..50.0f64,
        nt in 1usize..500,
        level in 0usize..10,
    ) {
        let config = RunConfig { gamma, b_re, x0, t1, nt, state: StateArg::Fock(level), ..Default::default() };
        prop_assert_eq!(RunConfig::parse_text(&config.to_text()).unwrap(), config);
    }
}
