use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebra;
use super::cartan::CartanSplit;
use super::CasimirError;

const HOM_TOL: f64 = 1e-10;

/// How a representation of `𝔨` was built from the isotropy action on `𝔭`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsotropyKind {
    /// Alternating `k`-forms on `𝔭`.
    Forms(usize),
    /// Spinors of a two-dimensional `𝔭`, as `ℂ²` viewed over `ℝ`.
    Spinor,
}

/// Linear representation of a subalgebra on `E_0 = ℝ^n` with inner product `gram`.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    /// Spanning elements of the represented subalgebra, in algebra coordinates.
    domain: Vec<DVector<f64>>,
    images: Vec<DMatrix<f64>>,
    gram: DMatrix<f64>,
    kind: Option<IsotropyKind>,
    full: bool,
}

/// JSON layout of a representation. `domain` defaults to the algebra basis
/// and `gram` to the identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawRepresentation {
    #[serde(default)]
    pub domain: Option<Vec<Vec<f64>>>,
    pub images: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub gram: Option<Vec<Vec<f64>>>,
}

fn square(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, CasimirError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CasimirError::Dimension(format!(
            "{what} must be a non-empty square matrix"
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl RawRepresentation {
    pub fn build(&self, alg: &LieAlgebra) -> Result<Representation, CasimirError> {
        let images = self
            .images
            .iter()
            .map(|m| square(m, "image"))
            .collect::<Result<Vec<_>, _>>()?;
        let domain = match &self.domain {
            Some(d) => d.iter().map(|v| DVector::from_column_slice(v)).collect(),
            None => (0..alg.dim()).map(|i| alg.basis_vector(i)).collect(),
        };
        let dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        let gram = match &self.gram {
            Some(g) => square(g, "gram")?,
            None => DMatrix::identity(dim, dim),
        };
        Representation::new(alg, domain, images, gram)
    }
}

/// Derivation extension of `a` (acting on `ℝ^n`) to `Λ^k ℝ^n` in the basis of
/// increasing multi-indices.
pub fn wedge_derivation(a: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let basis = combinations(n, k);
    let index = |set: &[usize]| basis.iter().position(|b| b.as_slice() == set);
    let mut out = DMatrix::zeros(basis.len(), basis.len());
    for (col, set) in basis.iter().enumerate() {
        for s in 0..k {
            for target in 0..n {
                let coef = a[(target, set[s])];
                if coef == 0.0 {
                    continue;
                }
                let mut word = set.clone();
                word[s] = target;
                if let Some((sorted, sign)) = sort_with_sign(&word) {
                    let row = index(&sorted).expect("sorted multi-index is a basis element");
                    out[(row, col)] += sign * coef;
                }
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn sort_with_sign(word: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut w = word.to_vec();
    let mut sign = 1.0;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

/// Left multiplication by the quaternion units `i, j` on `ℍ = ℝ⁴`: two
/// anticommuting skew matrices squaring to `−1`.
pub(crate) fn clifford_units() -> [DMatrix<f64>; 2] {
    let i = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, -1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0,
        ],
    );
    let j = DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, -1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0,
        ],
    );
    [i, j]
}

/// Spin lift `¼ Σ ⟨A e_i, e_j⟩ e_i e_j` of a skew endomorphism of `ℝ²`.
pub fn spin_lift(a: &DMatrix<f64>) -> DMatrix<f64> {
    let e = clifford_units();
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            out += &e[i] * &e[j] * (0.25 * a[(j, i)]);
        }
    }
    out
}

impl Representation {
    /// Checks sizes, the inner product, closure of the domain under brackets
    /// and the homomorphism property.
    pub fn new(
        alg: &LieAlgebra,
        domain: Vec<DVector<f64>>,
        images: Vec<DMatrix<f64>>,
        gram: DMatrix<f64>,
    ) -> Result<Self, CasimirError> {
        if domain.is_empty() || domain.len() != images.len() {
            return Err(CasimirError::Dimension(format!(
                "{} domain elements for {} images",
                domain.len(),
                images.len()
            )));
        }
        let dim = images[0].nrows();
        if images.iter().any(|m| m.nrows() != dim || m.ncols() != dim)
            || gram.nrows() != dim
            || gram.ncols() != dim
        {
            return Err(CasimirError::Dimension(
                "images and gram must share one square size".into(),
            ));
        }
        if domain.iter().any(|v| v.len() != alg.dim()) {
            return Err(CasimirError::Dimension(
                "domain vectors must have the algebra dimension".into(),
            ));
        }
        if (&gram - gram.transpose()).amax() > 1e-12 || gram.clone().cholesky().is_none() {
            return Err(CasimirError::InvalidRepresentation(
                "gram is not symmetric positive definite".into(),
            ));
        }
        let d = DMatrix::from_columns(&domain);
        let rank = d
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .filter(|s| **s > 1e-10)
            .count();
        if rank != domain.len() {
            return Err(CasimirError::InvalidRepresentation(
                "domain elements are linearly dependent".into(),
            ));
        }
        let rep = Representation {
            dim,
            domain,
            images,
            gram,
            kind: None,
            full: rank == alg.dim(),
        };
        let scale = rep.images.iter().map(|m| m.amax()).fold(1.0f64, f64::max);
        for a in 0..rep.domain.len() {
            for b in 0..rep.domain.len() {
                let br = alg.bracket(&rep.domain[a], &rep.domain[b]);
                let lhs = rep.image(&br).map_err(|_| {
                    CasimirError::InvalidRepresentation(format!(
                        "domain is not closed under the bracket ({a}, {b})"
                    ))
                })?;
                let rhs = &rep.images[a] * &rep.images[b] - &rep.images[b] * &rep.images[a];
                if (lhs - rhs).amax() > HOM_TOL * scale * scale {
                    return Err(CasimirError::InvalidRepresentation(format!(
                        "bracket ({a}, {b}) is not preserved"
                    )));
                }
            }
        }
        Ok(rep)
    }

    pub fn trivial(alg: &LieAlgebra, dim: usize) -> Self {
        let images = vec![DMatrix::zeros(dim, dim); alg.dim()];
        let domain = (0..alg.dim()).map(|i| alg.basis_vector(i)).collect();
        Representation::new(alg, domain, images, DMatrix::identity(dim, dim))
            .expect("trivial representation")
    }

    /// Adjoint representation with inner product `−B(·, θ·)`.
    pub fn adjoint(alg: &LieAlgebra) -> Result<Self, CasimirError> {
        let domain: Vec<_> = (0..alg.dim()).map(|i| alg.basis_vector(i)).collect();
        let images = domain.iter().map(|z| alg.ad(z)).collect();
        let gram = -(alg.killing() * alg.theta());
        let gram = (&gram + gram.transpose()) * 0.5;
        Representation::new(alg, domain, images, gram)
    }

    /// Isotropy action of `𝔨` composed with `α`.
    pub fn isotropy(
        alg: &LieAlgebra,
        split: &CartanSplit,
        kind: IsotropyKind,
    ) -> Result<Self, CasimirError> {
        if let IsotropyKind::Forms(k) = kind {
            if k > split.dim_p() {
                return Err(CasimirError::Dimension(format!(
                    "degree {k} exceeds dim 𝔭 = {}",
                    split.dim_p()
                )));
            }
        }
        if kind == IsotropyKind::Spinor && split.dim_p() != 2 {
            return Err(CasimirError::Unsupported(
                "spinors are built only for two-dimensional 𝔭".into(),
            ));
        }
        let domain = split.k().to_vec();
        let images: Vec<_> = domain
            .iter()
            .map(|y| alpha_star(kind, &isotropy_matrix(alg, split, y)))
            .collect();
        let dim = images[0].nrows();
        let mut rep = Representation::new(alg, domain, images, DMatrix::identity(dim, dim))?;
        rep.kind = Some(kind);
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> Option<IsotropyKind> {
        self.kind
    }

    /// Whether the whole algebra is represented.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn domain(&self) -> &[DVector<f64>] {
        &self.domain
    }

    pub fn images(&self) -> &[DMatrix<f64>] {
        &self.images
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// `π_*(x)` by linearity; errors if `x` is outside the domain span.
    pub fn image(&self, x: &DVector<f64>) -> Result<DMatrix<f64>, CasimirError> {
        let d = DMatrix::from_columns(&self.domain);
        let coords = d
            .clone()
            .svd(true, true)
            .solve(x, 1e-12)
            .map_err(|e| CasimirError::InvalidRepresentation(e.to_string()))?;
        if (&d * &coords - x).amax() > 1e-10 * x.amax().max(1.0) {
            return Err(CasimirError::NotInSubspace("representation domain"));
        }
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (m, c) in self.images.iter().zip(coords.iter()) {
            out += m * *c;
        }
        Ok(out)
    }

    /// Largest deviation from skewness of `π_*(Y)` for the given elements.
    pub fn skew_defect(&self, elems: &[DVector<f64>]) -> Result<f64, CasimirError> {
        let mut worst = 0.0f64;
        for y in elems {
            let m = self.image(y)?;
            worst = worst.max((m.transpose() * &self.gram + &self.gram * &m).amax());
        }
        Ok(worst)
    }
}

/// `ad y` restricted to `𝔭`, in the orthonormal `𝔭` coordinates.
pub fn isotropy_matrix(alg: &LieAlgebra, split: &CartanSplit, y: &DVector<f64>) -> DMatrix<f64> {
    let n = split.dim_p();
    let mut m = DMatrix::zeros(n, n);
    for (j, x) in split.p().iter().enumerate() {
        m.set_column(j, &split.p_coords(&alg.bracket(y, x)));
    }
    m
}

/// `α_*` of a skew endomorphism of `𝔭` for the given isotropy kind.
pub fn alpha_star(kind: IsotropyKind, a: &DMatrix<f64>) -> DMatrix<f64> {
    match kind {
        IsotropyKind::Forms(k) => wedge_derivation(a, k),
        IsotropyKind::Spinor => spin_lift(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casimir::cartan_split;

    #[test]
    fn wedge_extension_dims() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, -1.0, 0.0, 3.0, -2.0, -3.0, 0.0]);
        assert_eq!(wedge_derivation(&a, 0), DMatrix::zeros(1, 1));
        assert_eq!(wedge_derivation(&a, 1), a);
        // top degree acts by the trace
        assert!(wedge_derivation(&a, 3)[(0, 0)].abs() < 1e-15);
        // the extension is a homomorphism
        let b = DMatrix::from_row_slice(3, 3, &[0.0, -2.0, 0.5, 2.0, 0.0, 1.0, -0.5, -1.0, 0.0]);
        let lhs = wedge_derivation(&(&a * &b - &b * &a), 2);
        let (wa, wb) = (wedge_derivation(&a, 2), wedge_derivation(&b, 2));
        assert!((lhs - (&wa * &wb - &wb * &wa)).amax() < 1e-12);
    }

    #[test]
    fn clifford_relations() {
        let [e1, e2] = clifford_units();
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((&e1 * &e1 + &id).amax() < 1e-15);
        assert!((&e2 * &e2 + &id).amax() < 1e-15);
        assert!((&e1 * &e2 + &e2 * &e1).amax() < 1e-15);
    }

    #[test]
    fn standard_representations_validate() {
        let alg = LieAlgebra::sl2();
        let split = cartan_split(&alg).unwrap();
        let ad = Representation::adjoint(&alg).unwrap();
        assert!(ad.is_full());
        assert!(ad.skew_defect(split.k()).unwrap() < 1e-12);
        for k in 0..=2 {
            let r = Representation::isotropy(&alg, &split, IsotropyKind::Forms(k)).unwrap();
            assert!(!r.is_full());
            assert_eq!(r.dim(), [1, 2, 1][k]);
            assert!(r.skew_defect(split.k()).unwrap() < 1e-14);
        }
        let s = Representation::isotropy(&alg, &split, IsotropyKind::Spinor).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(matches!(
            s.image(&split.p()[0]),
            Err(CasimirError::NotInSubspace(_))
        ));
    }

    #[test]
    fn broken_homomorphism_is_rejected() {
        let alg = LieAlgebra::sl2();
        let raw = RawRepresentation {
            domain: None,
            images: vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 0.0]],
                vec![vec![0.0, 0.0], vec![2.0, 0.0]],
            ],
            gram: None,
        };
        assert!(matches!(
            raw.build(&alg),
            Err(CasimirError::InvalidRepresentation(_))
        ));
        let good = RawRepresentation {
            images: vec![
                vec![vec![1.0, 0.0], vec![0.0, -1.0]],
                vec![vec![0.0, 1.0], vec![0.0, 0.0]],
                vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            ],
            ..raw
        };
        assert!(good.build(&alg).unwrap().is_full());
    }
}
