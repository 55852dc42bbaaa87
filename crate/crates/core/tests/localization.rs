use orbispec::localization::{
    best_piece, cos4_bump, discrete_form_minimum, first_order_defect, make_partition,
    operator_lower_bound, second_order_defect, Cover, FirstOrderOperator, Grid1D,
    LocalizedOperator, Quadrature, Section1D,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn localization_bounds_hold(c in 2.0..10.0f64, w in 1.0..6.0f64, cut in 4.0..8.0f64, ramp in 0.3..1.5f64, lambda in -1.0..2.0f64) {
        let g = Grid1D::new(0.0, 12.0, 1200, Quadrature::Trapezoid).unwrap();
        let part = make_partition(&g, &Cover::new(vec![(0.0, cut + ramp), (cut - ramp, 12.0)], ramp)).unwrap();
        let u = Section1D::sample(&g, &cos4_bump(c.clamp(w / 2.0 + 0.1, 11.9 - w / 2.0), w));
        let op = LocalizedOperator::schrodinger(|x| (0.7 * x).sin(), 1.0);
        let bp = best_piece(&g, &u, &part, &op).unwrap();
        prop_assert!(bp.slack >= -1e-6);
        prop_assert!(first_order_defect(&g, &u, lambda, &part, &FirstOrderOperator::derivative()).unwrap().holds);
        prop_assert!(second_order_defect(&g, &u, lambda, &part, &op).unwrap().holds);
    }

    #[test]
    fn lower_bound_is_never_beaten(s in -2.0..2.0f64, c0 in 0.0..2.0f64) {
        let g = Grid1D::new(0.0, 20.0, 200, Quadrature::Trapezoid).unwrap();
        let min = discrete_form_minimum(&g, &LocalizedOperator::rotating(s, c0));
        prop_assert!(min >= operator_lower_bound(c0, s.abs()) - 1e-6);
    }
}
