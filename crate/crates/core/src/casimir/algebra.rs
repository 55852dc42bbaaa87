use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::CasimirError;

const STRUCTURE_TOL: f64 = 1e-12;

/// Real Lie algebra given by structure constants in a fixed basis `(Z_i)`,
/// with a candidate Cartan involution acting on coordinate columns.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawAlgebra", into = "RawAlgebra")]
pub struct LieAlgebra {
    dim: usize,
    /// `brackets[i * dim + j]` holds the coordinates of `[Z_i, Z_j]`.
    brackets: Vec<DVector<f64>>,
    theta: DMatrix<f64>,
    killing: DMatrix<f64>,
}

/// JSON layout: `brackets[i][j][k]` is the coefficient of `Z_k` in `[Z_i, Z_j]`.
#[derive(Serialize, Deserialize)]
struct RawAlgebra {
    brackets: Vec<Vec<Vec<f64>>>,
    theta: Vec<Vec<f64>>,
}

impl TryFrom<RawAlgebra> for LieAlgebra {
    type Error = CasimirError;
    fn try_from(r: RawAlgebra) -> Result<Self, CasimirError> {
        let n = r.theta.len();
        if r.theta.iter().any(|row| row.len() != n) {
            return Err(CasimirError::Dimension("theta must be square".into()));
        }
        let theta = DMatrix::from_fn(n, n, |i, j| r.theta[i][j]);
        LieAlgebra::new(r.brackets, theta)
    }
}

impl From<LieAlgebra> for RawAlgebra {
    fn from(a: LieAlgebra) -> Self {
        let n = a.dim;
        RawAlgebra {
            brackets: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| a.brackets[i * n + j].iter().copied().collect())
                        .collect()
                })
                .collect(),
            theta: (0..n)
                .map(|i| (0..n).map(|j| a.theta[(i, j)]).collect())
                .collect(),
        }
    }
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(brackets: Vec<Vec<Vec<f64>>>, theta: DMatrix<f64>) -> Result<Self, CasimirError> {
        let n = brackets.len();
        if n == 0 {
            return Err(CasimirError::InvalidAlgebra("empty basis".into()));
        }
        if theta.nrows() != n || theta.ncols() != n {
            return Err(CasimirError::Dimension(format!(
                "theta is {}x{}, algebra has dimension {n}",
                theta.nrows(),
                theta.ncols()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in brackets.iter().enumerate() {
            if row.len() != n || row.iter().any(|c| c.len() != n) {
                return Err(CasimirError::Dimension(format!(
                    "bracket row {i} is not {n}x{n}"
                )));
            }
            for c in row {
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(CasimirError::InvalidAlgebra(
                        "non-finite structure constant".into(),
                    ));
                }
                flat.push(DVector::from_column_slice(c));
            }
        }
        let mut alg = LieAlgebra {
            dim: n,
            brackets: flat,
            theta,
            killing: DMatrix::zeros(n, n),
        };
        let scale = alg.brackets.iter().map(|v| v.amax()).fold(1.0f64, f64::max);
        for i in 0..n {
            for j in 0..n {
                let s = &alg.brackets[i * n + j] + &alg.brackets[j * n + i];
                if s.amax() > STRUCTURE_TOL * scale {
                    return Err(CasimirError::InvalidAlgebra(format!(
                        "[Z_{i}, Z_{j}] is not antisymmetric"
                    )));
                }
            }
        }
        let e = |i: usize| DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (e(i), e(j), e(k));
                    let jac = alg.bracket(&x, &alg.bracket(&y, &z))
                        + alg.bracket(&y, &alg.bracket(&z, &x))
                        + alg.bracket(&z, &alg.bracket(&x, &y));
                    if jac.amax() > STRUCTURE_TOL * scale * scale {
                        return Err(CasimirError::InvalidAlgebra(format!(
                            "Jacobi identity fails on ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        alg.killing = DMatrix::from_fn(n, n, |i, j| (alg.ad(&e(i)) * alg.ad(&e(j))).trace());
        Ok(alg)
    }

    /// `sl(2, ℝ)` in the basis `H, E, F` with `θ(X) = −Xᵀ`.
    pub fn sl2() -> Self {
        let mut b = vec![vec![vec![0.0; 3]; 3]; 3];
        b[0][1] = vec![0.0, 2.0, 0.0];
        b[1][0] = vec![0.0, -2.0, 0.0];
        b[0][2] = vec![0.0, 0.0, -2.0];
        b[2][0] = vec![0.0, 0.0, 2.0];
        b[1][2] = vec![1.0, 0.0, 0.0];
        b[2][1] = vec![-1.0, 0.0, 0.0];
        let theta =
            DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]);
        LieAlgebra::new(b, theta).expect("sl2 structure constants are valid")
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebra::new(vec![vec![vec![0.0; n]; n]; n], DMatrix::identity(n, n))
            .expect("abelian algebra is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> &DMatrix<f64> {
        &self.theta
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        DVector::from_fn(self.dim, |k, _| if k == i { 1.0 } else { 0.0 })
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] != 0.0 {
                    out.axpy(x[i] * y[j], &self.brackets[i * n + j], 1.0);
                }
            }
        }
        out
    }

    /// Matrix of `ad x` on coordinate columns.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &self.bracket(x, &self.basis_vector(j)));
        }
        m
    }

    /// Gram matrix `B_ij = tr(ad Z_i ∘ ad Z_j)`.
    pub fn killing(&self) -> &DMatrix<f64> {
        &self.killing
    }

    pub fn killing_form(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.killing * y)[(0, 0)]
    }
}

/// Killing form of `alg` in its basis.
pub fn killing_form(alg: &LieAlgebra) -> DMatrix<f64> {
    alg.killing().clone()
}
