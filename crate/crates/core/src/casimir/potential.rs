use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::algebra::LieAlgebra;
use super::cartan::CartanSplit;
use super::rep::{alpha_star, Representation};
use super::CasimirError;

const P_TOL: f64 = 1e-10;

/// Rough part, potential and the Casimir computed from the inverse Killing
/// matrix, for a representation of the whole algebra.
#[derive(Clone, Debug)]
pub struct CasimirSplit {
    pub rough: DMatrix<f64>,
    pub potential: DMatrix<f64>,
    pub casimir: DMatrix<f64>,
    /// `‖rough + potential − casimir‖_max`.
    pub split_defect: f64,
}

/// `Σ π_*(Y_j)²` over the `𝔨` basis.
pub fn isotropy_potential(
    split: &CartanSplit,
    rep: &Representation,
) -> Result<DMatrix<f64>, CasimirError> {
    let mut v = DMatrix::zeros(rep.dim(), rep.dim());
    for y in split.k() {
        let m = rep.image(y)?;
        v += &m * &m;
    }
    Ok(v)
}

pub fn casimir_split(
    alg: &LieAlgebra,
    split: &CartanSplit,
    rep: &Representation,
) -> Result<CasimirSplit, CasimirError> {
    if !rep.is_full() {
        return Err(CasimirError::InvalidRepresentation(
            "the Casimir needs a representation of the whole algebra".into(),
        ));
    }
    let gram = split.adapted_gram();
    let expect = DMatrix::from_fn(gram.nrows(), gram.ncols(), |i, j| {
        if i != j {
            0.0
        } else if i < split.dim_p() {
            1.0
        } else {
            -1.0
        }
    });
    if (gram - expect).amax() > 1e-10 {
        return Err(CasimirError::Signature(
            "adapted basis is not signed-orthonormal".into(),
        ));
    }
    let n = rep.dim();
    let mut rough = DMatrix::zeros(n, n);
    for x in split.p() {
        let m = rep.image(x)?;
        rough -= &m * &m;
    }
    let potential = isotropy_potential(split, rep)?;
    let binv = alg
        .killing()
        .clone()
        .try_inverse()
        .ok_or_else(|| CasimirError::Signature("the Killing form is degenerate".into()))?;
    let images: Vec<_> = (0..alg.dim())
        .map(|i| rep.image(&alg.basis_vector(i)))
        .collect::<Result<_, _>>()?;
    let mut casimir = DMatrix::zeros(n, n);
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            if binv[(i, j)] != 0.0 {
                casimir -= &images[i] * &images[j] * binv[(i, j)];
            }
        }
    }
    let split_defect = (&rough + &potential - &casimir).amax();
    Ok(CasimirSplit {
        rough,
        potential,
        casimir,
        split_defect,
    })
}

/// `max ‖[C, π_*(Z)]‖` over the representation domain.
pub fn commutator_defect(c: &DMatrix<f64>, rep: &Representation) -> f64 {
    rep.images()
        .iter()
        .map(|m| (c * m - m * c).amax())
        .fold(0.0, f64::max)
}

fn require_p(split: &CartanSplit, v: &DVector<f64>) -> Result<(), CasimirError> {
    if split.in_p(v, P_TOL) {
        Ok(())
    } else {
        Err(CasimirError::NotInSubspace("𝔭"))
    }
}

/// Symmetric-space curvature `R(X,Y)Z = −[[X,Y],Z]` on `𝔭`.
pub fn curvature_from_brackets(
    alg: &LieAlgebra,
    split: &CartanSplit,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> Result<DVector<f64>, CasimirError> {
    for v in [x, y, z] {
        require_p(split, v)?;
    }
    Ok(-alg.bracket(&alg.bracket(x, y), z))
}

/// `R(X,Y)` as a matrix in the `𝔭` coordinates.
pub fn curvature_endomorphism(
    alg: &LieAlgebra,
    split: &CartanSplit,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<DMatrix<f64>, CasimirError> {
    let n = split.dim_p();
    let mut m = DMatrix::zeros(n, n);
    for (j, e) in split.p().iter().enumerate() {
        m.set_column(
            j,
            &split.p_coords(&curvature_from_brackets(alg, split, x, y, e)?),
        );
    }
    Ok(m)
}

/// `B(R(X,Y)Y, X) / (B(X,X)B(Y,Y) − B(X,Y)²)`.
pub fn sectional_curvature(
    alg: &LieAlgebra,
    split: &CartanSplit,
    x: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<f64, CasimirError> {
    let r = curvature_from_brackets(alg, split, x, y, y)?;
    let b = |u: &DVector<f64>, v: &DVector<f64>| alg.killing_form(u, v);
    let area = b(x, x) * b(y, y) - b(x, y).powi(2);
    if !(area > 1e-14) {
        return Err(CasimirError::Dimension("X and Y span no plane".into()));
    }
    Ok(b(&r, x) / area)
}

/// `(A ∧ C)(X) = ⟨A, X⟩C − ⟨C, X⟩A` in orthonormal coordinates.
pub fn wedge_endomorphism(a: &DVector<f64>, c: &DVector<f64>) -> DMatrix<f64> {
    c * a.transpose() - a * c.transpose()
}

/// Potential of the Casimir of an isotropy representation, once from the
/// `𝔨` basis and once as a curvature expression.
#[derive(Clone, Debug)]
pub struct PotentialComparison {
    pub from_casimir: DMatrix<f64>,
    pub from_curvature: DMatrix<f64>,
    pub defect: f64,
}

pub fn potential_via_curvature(
    alg: &LieAlgebra,
    split: &CartanSplit,
    rep: &Representation,
) -> Result<PotentialComparison, CasimirError> {
    let kind = rep.kind().ok_or_else(|| {
        CasimirError::InvalidRepresentation(
            "representation is not built from the isotropy action".into(),
        )
    })?;
    let from_casimir = isotropy_potential(split, rep)?;
    let n = split.dim_p();
    let mut from_curvature = DMatrix::zeros(rep.dim(), rep.dim());
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let ei = DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
            let ej = DVector::from_fn(n, |k, _| if k == j { 1.0 } else { 0.0 });
            let w = alpha_star(kind, &wedge_endomorphism(&ei, &ej));
            let r = alpha_star(
                kind,
                &curvature_endomorphism(alg, split, &split.p()[i], &split.p()[j])?,
            );
            from_curvature += w * r * 0.5;
        }
    }
    let defect = (&from_casimir - &from_curvature).amax();
    Ok(PotentialComparison {
        from_casimir,
        from_curvature,
        defect,
    })
}

/// `‖2[Y,X] − Σ (X_i ∧ [Y,X_i])(X)‖` for `Y ∈ 𝔨`, `X ∈ 𝔭`, with the wedge
/// taken for the Killing form.
pub fn bracket_identity_defect(
    alg: &LieAlgebra,
    split: &CartanSplit,
    y: &DVector<f64>,
    x: &DVector<f64>,
) -> Result<f64, CasimirError> {
    if !split.in_k(y, P_TOL) {
        return Err(CasimirError::NotInSubspace("𝔨"));
    }
    require_p(split, x)?;
    let lhs = alg.bracket(y, x) * 2.0;
    let mut rhs = DVector::zeros(alg.dim());
    for xi in split.p() {
        let yxi = alg.bracket(y, xi);
        rhs.axpy(alg.killing_form(xi, x), &yxi, 1.0);
        rhs.axpy(-alg.killing_form(&yxi, x), xi, 1.0);
    }
    Ok((lhs - rhs).amax())
}

/// Summary numbers for `sl(2, ℝ)`-style reports.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSummary {
    pub sectional_curvature: f64,
    pub bianchi_defect: f64,
}

pub fn curvature_summary(
    alg: &LieAlgebra,
    split: &CartanSplit,
) -> Result<CurvatureSummary, CasimirError> {
    let p = split.p();
    if p.len() < 2 {
        return Err(CasimirError::Dimension("𝔭 has no plane".into()));
    }
    let sectional_curvature = sectional_curvature(alg, split, &p[0], &p[1])?;
    let mut bianchi_defect = 0.0f64;
    for a in p {
        for b in p {
            for c in p {
                let s = curvature_from_brackets(alg, split, a, b, c)?
                    + curvature_from_brackets(alg, split, b, c, a)?
                    + curvature_from_brackets(alg, split, c, a, b)?;
                bianchi_defect = bianchi_defect.max(s.amax());
            }
        }
    }
    Ok(CurvatureSummary {
        sectional_curvature,
        bianchi_defect,
    })
}
