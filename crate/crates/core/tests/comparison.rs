use nalgebra::{DMatrix, DVector};
use orbispec::comparison::{
    comparison_margins, jacobi_solve, riccati_solve, CurvatureProfile, RiccatiInit,
};
use proptest::prelude::*;

/// `K(t) = R(φt) diag(k₁, k₂) R(φt)ᵀ` with both eigenvalues in `[1, 2.25]`.
fn rotating_profile(amp: [f64; 2], freq: [f64; 2], phase: [f64; 2], spin: f64) -> CurvatureProfile {
    CurvatureProfile::new(2, 1.0, 1.5, move |t| {
        let k1 = 1.625 + amp[0] * (freq[0] * t + phase[0]).sin();
        let k2 = 1.625 + amp[1] * (freq[1] * t + phase[1]).sin();
        let (s, c) = (spin * t).sin_cos();
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        &rot * DMatrix::from_diagonal(&DVector::from_vec(vec![k1, k2])) * rot.transpose()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riccati_solution_is_sandwiched(
        a0 in 0.0..0.625f64, a1 in 0.0..0.625f64,
        f0 in 0.2..3.0f64, f1 in 0.2..3.0f64,
        p0 in 0.0..6.3f64, p1 in 0.0..6.3f64,
        spin in -1.0..1.0f64,
        q in proptest::array::uniform4(-1.0..1.0f64),
    ) {
        let prof = rotating_profile([a0, a1], [f0, f1], [p0, p1], spin);
        prof.check_pinching(3.0, 200).unwrap();
        let b = DMatrix::from_row_slice(2, 2, &q);
        let init = RiccatiInit::regular(&b * b.transpose()).unwrap();
        let path = riccati_solve(&prof, &init, 3.0, 0.01).unwrap();
        let m = comparison_margins(&path, &init, 1.0, 1.5).unwrap();
        prop_assert!(m.lower >= -1e-6 && m.upper >= -1e-6, "{:?}", m);
        prop_assert!(path.symmetry_defect() < 1e-10);
    }

    #[test]
    fn rauch_bound_is_attained_in_constant_curvature(b in 0.2..2.0f64, j in 0.1..3.0f64) {
        let prof = CurvatureProfile::constant(1, b).unwrap();
        let path = jacobi_solve(&prof, &DVector::from_element(1, j), &DVector::zeros(1), 2.0, 1e-3).unwrap();
        for (t, v) in path.t.iter().zip(&path.j) {
            let exact = (b * t).cosh() * j;
            prop_assert!((v[0].abs() - exact).abs() <= 1e-8 * (1.0 + exact));
        }
    }

    #[test]
    fn rauch_bound_holds_for_pinched_curvature(
        amp in 0.0..0.6f64, f in 0.3..2.0f64, j in proptest::array::uniform2(-1.0..1.0f64),
    ) {
        let prof = CurvatureProfile::isotropic(2, 1.0, 1.5, move |t| 1.625 + amp * (f * t).sin()).unwrap();
        let j0 = DVector::from_column_slice(&j);
        let path = jacobi_solve(&prof, &j0, &DVector::zeros(2), 2.0, 1e-3).unwrap();
        for (t, v) in path.t.iter().zip(&path.j) {
            prop_assert!(v.norm() <= (1.5 * t).cosh() * j0.norm() * (1.0 + 1e-9) + 1e-12);
            prop_assert!(v.norm() >= t.cosh() * j0.norm() * (1.0 - 1e-9) - 1e-12);
        }
    }
}
