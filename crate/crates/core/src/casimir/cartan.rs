use nalgebra::{DMatrix, DVector};

use super::algebra::LieAlgebra;
use super::CasimirError;

const INVOLUTION_TOL: f64 = 1e-10;

/// Eigenspaces of the Cartan involution with bases normalized so that
/// `B(X_i, X_j) = δ_ij` on `𝔭` and `B(Y_i, Y_j) = −δ_ij` on `𝔨`.
#[derive(Clone, Debug)]
pub struct CartanSplit {
    p: Vec<DVector<f64>>,
    k: Vec<DVector<f64>>,
    killing: DMatrix<f64>,
    theta: DMatrix<f64>,
}

/// Orthonormalizes the columns of `span` for the form `sign · B`, after a
/// Euclidean pass that discards dependent columns.
fn signed_basis(
    span: &DMatrix<f64>,
    b: &DMatrix<f64>,
    sign: f64,
    label: &str,
) -> Result<Vec<DVector<f64>>, CasimirError> {
    let mut euclid: Vec<DVector<f64>> = Vec::new();
    for c in span.column_iter() {
        let mut v = c.clone_owned();
        for e in &euclid {
            let d = e.dot(&v);
            v.axpy(-d, e, 1.0);
        }
        let n = v.norm();
        if n > 1e-9 {
            euclid.push(v / n);
        }
    }
    let form = |x: &DVector<f64>, y: &DVector<f64>| sign * (x.transpose() * b * y)[(0, 0)];
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v0 in euclid {
        let mut v = v0;
        for e in &out {
            let d = form(e, &v);
            v.axpy(-d, e, 1.0);
        }
        let q = form(&v, &v);
        if !(q > 1e-10) {
            return Err(CasimirError::Signature(format!(
                "the Killing form is not {} definite on {label}",
                if sign > 0.0 { "positive" } else { "negative" }
            )));
        }
        out.push(v / q.sqrt());
    }
    Ok(out)
}

pub fn cartan_split(alg: &LieAlgebra) -> Result<CartanSplit, CasimirError> {
    let n = alg.dim();
    let theta = alg.theta();
    let id = DMatrix::<f64>::identity(n, n);
    if (theta * theta - &id).amax() > INVOLUTION_TOL {
        return Err(CasimirError::NotInvolution("θ² ≠ id".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (alg.basis_vector(i), alg.basis_vector(j));
            let lhs = theta * alg.bracket(&x, &y);
            let rhs = alg.bracket(&(theta * &x), &(theta * &y));
            if (lhs - rhs).amax() > INVOLUTION_TOL {
                return Err(CasimirError::NotInvolution(format!(
                    "θ does not preserve [Z_{i}, Z_{j}]"
                )));
            }
        }
    }
    let b = alg.killing();
    let k = signed_basis(&((&id + theta) * 0.5), b, -1.0, "𝔨")?;
    let p = signed_basis(&((&id - theta) * 0.5), b, 1.0, "𝔭")?;
    Ok(CartanSplit {
        p,
        k,
        killing: b.clone(),
        theta: theta.clone(),
    })
}

impl CartanSplit {
    pub fn p(&self) -> &[DVector<f64>] {
        &self.p
    }

    pub fn k(&self) -> &[DVector<f64>] {
        &self.k
    }

    pub fn dim_p(&self) -> usize {
        self.p.len()
    }

    pub fn dim_k(&self) -> usize {
        self.k.len()
    }

    fn form(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.killing * y)[(0, 0)]
    }

    /// Coordinates of `x` in the `𝔭` basis; assumes `x ∈ 𝔭`.
    pub fn p_coords(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.p.len(), self.p.iter().map(|e| self.form(e, x)))
    }

    /// Coordinates of `x` in the `𝔨` basis; assumes `x ∈ 𝔨`.
    pub fn k_coords(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.k.len(), self.k.iter().map(|e| -self.form(e, x)))
    }

    pub fn from_p_coords(&self, c: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.theta.nrows());
        for (e, &ci) in self.p.iter().zip(c.iter()) {
            v.axpy(ci, e, 1.0);
        }
        v
    }

    pub fn k_part(&self, z: &DVector<f64>) -> DVector<f64> {
        (z + &self.theta * z) * 0.5
    }

    pub fn p_part(&self, z: &DVector<f64>) -> DVector<f64> {
        (z - &self.theta * z) * 0.5
    }

    pub fn in_p(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.k_part(x).amax() <= tol * x.amax().max(1.0)
    }

    pub fn in_k(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.p_part(x).amax() <= tol * x.amax().max(1.0)
    }

    /// Basis `(X_1..X_p, Y_1..Y_k)` of the whole algebra.
    pub fn adapted_basis(&self) -> Vec<DVector<f64>> {
        self.p.iter().chain(self.k.iter()).cloned().collect()
    }

    /// Killing Gram matrix in the adapted basis; `diag(1, .., 1, −1, .., −1)`
    /// up to rounding.
    pub fn adapted_gram(&self) -> DMatrix<f64> {
        let basis = self.adapted_basis();
        DMatrix::from_fn(basis.len(), basis.len(), |i, j| {
            self.form(&basis[i], &basis[j])
        })
    }

    /// Largest deviation from `[𝔨,𝔨] ⊆ 𝔨`, `[𝔨,𝔭] ⊆ 𝔭`, `[𝔭,𝔭] ⊆ 𝔨`.
    pub fn symmetric_pair_defect(&self, alg: &LieAlgebra) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.k {
            for b in &self.k {
                worst = worst.max(self.p_part(&alg.bracket(a, b)).amax());
            }
            for x in &self.p {
                worst = worst.max(self.k_part(&alg.bracket(a, x)).amax());
            }
        }
        for x in &self.p {
            for y in &self.p {
                worst = worst.max(self.p_part(&alg.bracket(x, y)).amax());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_eigenspaces() {
        let alg = LieAlgebra::sl2();
        let s = cartan_split(&alg).unwrap();
        assert_eq!((s.dim_p(), s.dim_k()), (2, 1));
        let g = s.adapted_gram();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0]));
        assert!((g - expect).amax() < 1e-14);
        // 𝔨 is spanned by E − F
        let y = &s.k()[0];
        assert!(y[0].abs() < 1e-15 && (y[1] + y[2]).abs() < 1e-15);
        let h = alg.basis_vector(0);
        let epf = DVector::from_vec(vec![0.0, 1.0, 1.0]);
        assert!(s.in_p(&h, 1e-14) && s.in_p(&epf, 1e-14));
        assert!(s.symmetric_pair_defect(&alg) < 1e-14);
    }

    #[test]
    fn rejects_non_involution() {
        let mut b = vec![vec![vec![0.0; 3]; 3]; 3];
        b[0][1] = vec![0.0, 2.0, 0.0];
        b[1][0] = vec![0.0, -2.0, 0.0];
        b[0][2] = vec![0.0, 0.0, -2.0];
        b[2][0] = vec![0.0, 0.0, 2.0];
        b[1][2] = vec![1.0, 0.0, 0.0];
        b[2][1] = vec![-1.0, 0.0, 0.0];
        let not_inv = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 0.5]));
        let alg = LieAlgebra::new(b.clone(), not_inv).unwrap();
        assert!(matches!(
            cartan_split(&alg),
            Err(CasimirError::NotInvolution(_))
        ));
        // an involution that is not an automorphism
        let flip = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 1.0]));
        assert!(matches!(
            cartan_split(&LieAlgebra::new(b, flip).unwrap()),
            Err(CasimirError::NotInvolution(_))
        ));
    }

    #[test]
    fn wrong_signature_is_reported() {
        // θ = id makes all of sl2 the 𝔨 part, where B is indefinite
        let mut alg = LieAlgebra::sl2();
        let json = serde_json::to_value(&alg).unwrap();
        let mut raw = json.clone();
        raw["theta"] = serde_json::json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        alg = serde_json::from_value(raw).unwrap();
        assert!(matches!(
            cartan_split(&alg),
            Err(CasimirError::Signature(_))
        ));
    }
}
