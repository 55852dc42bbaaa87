use nalgebra::{DMatrix, DVector, Matrix2};
use orbispec::casimir::{
    bracket_identity_defect, cartan_split, casimir_split, commutator_defect,
    covariant_derivative_rule, isotropy_potential, potential_via_curvature, IsotropyKind,
    LieAlgebra, Representation,
};
use proptest::prelude::*;

/// `H, E, F` as 2×2 matrices.
fn as_matrix(x: &DVector<f64>) -> Matrix2<f64> {
    Matrix2::new(x[0], x[1], x[2], -x[0])
}

#[test]
fn form_potentials_match_curvature_terms() {
    let alg = LieAlgebra::sl2();
    let split = cartan_split(&alg).unwrap();
    for k in 0..=2 {
        let rep = Representation::isotropy(&alg, &split, IsotropyKind::Forms(k)).unwrap();
        let cmp = potential_via_curvature(&alg, &split, &rep).unwrap();
        assert!(cmp.defect <= 1e-10, "k = {k}: {}", cmp.defect);
        // the isotropy Casimir is K-equivariant
        let v = isotropy_potential(&split, &rep).unwrap();
        assert!(commutator_defect(&v, &rep) <= 1e-10);
    }
    let adj = Representation::adjoint(&alg).unwrap();
    let cs = casimir_split(&alg, &split, &adj).unwrap();
    assert!(commutator_defect(&cs.casimir, &adj) <= 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bracket_identity_on_random_pairs(s in -3.0..3.0f64, a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let alg = LieAlgebra::sl2();
        let split = cartan_split(&alg).unwrap();
        let y = &split.k()[0] * s;
        let x = &split.p()[0] * a + &split.p()[1] * b;
        prop_assert!(bracket_identity_defect(&alg, &split, &y, &x).unwrap() <= 1e-12 * (1.0 + s * s) * (1.0 + a * a + b * b));
    }

    /// Polar decomposition `e^{tZ} = p(t) k(t)` moves `[e^{tZ}, u(t)]` to
    /// `[p(t), π(k(t)) u(t)]`; its centered difference quotient at 0 must
    /// agree with the closed-form rule.
    #[test]
    fn covariant_rule_matches_polar_differences(
        z in proptest::array::uniform3(-1.5..1.5f64),
        u0 in proptest::array::uniform2(-1.0..1.0f64),
        du in proptest::array::uniform2(-1.0..1.0f64),
        w in proptest::array::uniform2(-1.0..1.0f64),
    ) {
        let alg = LieAlgebra::sl2();
        let split = cartan_split(&alg).unwrap();
        let rep = Representation::isotropy(&alg, &split, IsotropyKind::Forms(1)).unwrap();
        let z = DVector::from_column_slice(&z);
        let (u0, du, w) = (DVector::from_column_slice(&u0), DVector::from_column_slice(&du), DVector::from_column_slice(&w));
        let k_dir = DVector::from_vec(vec![0.0, 1.0, -1.0]);
        let pi_k = rep.image(&k_dir).unwrap();
        let transported = |t: f64| -> DVector<f64> {
            let g = (as_matrix(&z) * t).exp();
            let p = (g * g.transpose()).symmetric_eigen();
            let sqrt = p.eigenvectors * Matrix2::from_diagonal(&p.eigenvalues.map(f64::sqrt)) * p.eigenvectors.transpose();
            let k = sqrt.try_inverse().unwrap() * g;
            let angle = k[(0, 1)].atan2(k[(0, 0)]);
            let u = &u0 + &du * t + &w * (t * t);
            (&pi_k * angle).exp() * u
        };
        let h = 1e-5;
        let fd = (transported(h) - transported(-h)) / (2.0 * h);
        let rule = covariant_derivative_rule(&split, &rep, &z, &u0, &du).unwrap();
        prop_assert!((&fd - &rule).amax() <= 1e-7, "{} vs {}", fd, rule);
    }
}

#[test]
fn commutator_of_zero_is_zero() {
    let alg = LieAlgebra::sl2();
    let rep = Representation::adjoint(&alg).unwrap();
    assert_eq!(commutator_defect(&DMatrix::zeros(3, 3), &rep), 0.0);
}
