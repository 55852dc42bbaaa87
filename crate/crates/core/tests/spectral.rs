use orbispec::spectral::{
    eigen_bottom, ess_bottom, radial_reduce, EndKind, EssParams, Verdict, WarpedEnd,
};
use orbispec::tables::{delta0, mckean_bound};
use proptest::prelude::*;

#[test]
fn funnel_bottom_matches_tables() {
    let rep = ess_bottom(
        &WarpedEnd::new(EndKind::Funnel, 0),
        &EssParams {
            h: 5e-3,
            ..Default::default()
        },
    )
    .unwrap();
    assert!((rep.extrapolated - delta0(2, 1).unwrap()).abs() <= 1e-3);
    assert!((rep.extrapolated - mckean_bound(2, 1.0).unwrap()).abs() <= 1e-3);
    assert_eq!(rep.verdict, Verdict::Pass);
}

fn kind() -> impl Strategy<Value = EndKind> {
    prop_oneof![
        Just(EndKind::Funnel),
        Just(EndKind::Cusp),
        Just(EndKind::Cylinder)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dirichlet_monotone_in_length(k in kind(), n in 0i64..3, t in 4.0..12.0f64) {
        let end = WarpedEnd::new(k, n);
        let h = 0.01;
        // lengths on the same lattice so the grids nest
        let t0 = (t / h).round() * h;
        let l0 = eigen_bottom(&radial_reduce(&end, t0, h).unwrap());
        let l1 = eigen_bottom(&radial_reduce(&end, t0 + 1.0, h).unwrap());
        prop_assert!(l1 <= l0 + 1e-9, "{} then {}", l0, l1);
    }

    #[test]
    fn channels_do_not_lower_the_bottom(k in kind(), n in 0i64..4, t in 4.0..12.0f64) {
        let h = 0.01;
        let a = eigen_bottom(&radial_reduce(&WarpedEnd::new(k, n), t, h).unwrap());
        let b = eigen_bottom(&radial_reduce(&WarpedEnd::new(k, -(n + 1)), t, h).unwrap());
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn refinement_ratio_is_four(k in kind(), n in 0i64..2) {
        let end = WarpedEnd::new(k, n);
        let l = |h: f64| eigen_bottom(&radial_reduce(&end, 3.0, h).unwrap());
        let (a, b, c) = (l(0.02), l(0.01), l(0.005));
        let ratio = (a - b) / (b - c);
        prop_assert!((ratio - 4.0).abs() < 0.2, "{}", ratio);
    }
}
