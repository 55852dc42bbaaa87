use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use sha2::{Digest, Sha256};

use super::ComparisonError;

type OperatorFn = dyn Fn(f64) -> DMatrix<f64> + Send + Sync;
type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
enum Field {
    Matrix(Arc<OperatorFn>),
    Isotropic(Arc<ScalarFn>),
}

/// Curvature along a unit-speed geodesic, restricted to its normal space.
///
/// Stores `K(t) = −R_c(t)`, whose spectrum lies in `[a², b²]` when the
/// sectional curvature is pinched in `[−b², −a²]`. Jacobi fields then solve
/// `J″ = K J` and shape operators `S′ + S² = K`.
#[derive(Clone)]
pub struct CurvatureProfile {
    dim: usize,
    field: Field,
    a: f64,
    b: f64,
    b_prime: Option<f64>,
}

impl fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureProfile")
            .field("dim", &self.dim)
            .field("isotropic", &matches!(self.field, Field::Isotropic(_)))
            .field("a", &self.a)
            .field("b", &self.b)
            .field("b_prime", &self.b_prime)
            .finish()
    }
}

fn check_pinch(a: f64, b: f64) -> Result<(), ComparisonError> {
    if !(a > 0.0 && a <= b && b.is_finite()) {
        return Err(ComparisonError::Precondition(format!(
            "pinching needs 0 < a ≤ b, got a={a}, b={b}"
        )));
    }
    Ok(())
}

impl CurvatureProfile {
    pub fn new(
        dim: usize,
        a: f64,
        b: f64,
        op: impl Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Result<Self, ComparisonError> {
        check_pinch(a, b)?;
        if dim == 0 {
            return Err(ComparisonError::Precondition(
                "normal space must be nonzero".into(),
            ));
        }
        Ok(CurvatureProfile {
            dim,
            field: Field::Matrix(Arc::new(op)),
            a,
            b,
            b_prime: None,
        })
    }

    /// `K(t) = k(t)·Id`: sectional curvature `−k(t)` in every normal direction.
    pub fn isotropic(
        dim: usize,
        a: f64,
        b: f64,
        k: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, ComparisonError> {
        check_pinch(a, b)?;
        if dim == 0 {
            return Err(ComparisonError::Precondition(
                "normal space must be nonzero".into(),
            ));
        }
        Ok(CurvatureProfile {
            dim,
            field: Field::Isotropic(Arc::new(k)),
            a,
            b,
            b_prime: None,
        })
    }

    /// Constant sectional curvature `−k²`.
    pub fn constant(dim: usize, k: f64) -> Result<Self, ComparisonError> {
        let k2 = k * k;
        CurvatureProfile::isotropic(dim, k, k, move |_| k2).map(|p| p.with_derivative_bound(0.0))
    }

    /// `K(t) = (1 + 0.5 sin t)²·Id`, pinched by `(1, 1.5)` on `[0, π]`.
    pub fn sinusoidal(dim: usize) -> Self {
        CurvatureProfile::isotropic(dim, 1.0, 1.5, |t| (1.0 + 0.5 * t.sin()).powi(2))
            .expect("valid pinching")
    }

    pub fn with_derivative_bound(mut self, b_prime: f64) -> Self {
        self.b_prime = Some(b_prime);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn b_prime(&self) -> Option<f64> {
        self.b_prime
    }

    pub fn operator(&self, t: f64) -> DMatrix<f64> {
        match &self.field {
            Field::Matrix(f) => f(t),
            Field::Isotropic(k) => DMatrix::identity(self.dim, self.dim) * k(t),
        }
    }

    /// `k(t)` when the profile is isotropic.
    pub fn scalar_at(&self, t: f64) -> Option<f64> {
        match &self.field {
            Field::Isotropic(k) => Some(k(t)),
            Field::Matrix(_) => None,
        }
    }

    /// Samples the spectrum of `K` on `[0, t_max]` and checks it lies in `[a², b²]`.
    pub fn check_pinching(&self, t_max: f64, samples: usize) -> Result<(), ComparisonError> {
        let (lo, hi) = (self.a * self.a, self.b * self.b);
        let slack = 1e-12 * (1.0 + hi);
        for k in 0..=samples.max(1) {
            let t = t_max * k as f64 / samples.max(1) as f64;
            let m = self.operator(t);
            if (&m - m.transpose()).norm() > 1e-10 * (1.0 + m.norm()) {
                return Err(ComparisonError::Precondition(format!(
                    "curvature operator not symmetric at t={t}"
                )));
            }
            let eig = SymmetricEigen::new(m).eigenvalues;
            if eig.iter().any(|&e| e < lo - slack || e > hi + slack) {
                return Err(ComparisonError::Precondition(format!(
                    "spectrum {:?} at t={t} leaves [{lo}, {hi}]",
                    eig.as_slice()
                )));
            }
        }
        Ok(())
    }
}

/// Initial condition `(P, Q(0))` of a shape operator.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiInit {
    p: DMatrix<f64>,
    q0: DMatrix<f64>,
}

impl RiccatiInit {
    pub fn new(p: DMatrix<f64>, q0: DMatrix<f64>) -> Result<Self, ComparisonError> {
        let n = p.nrows();
        if p.ncols() != n || q0.shape() != (n, n) {
            return Err(ComparisonError::InvalidInit(
                "P and Q0 must be square of equal size".into(),
            ));
        }
        if (&p - p.transpose()).norm() > 1e-12 || (&p * &p - &p).norm() > 1e-10 {
            return Err(ComparisonError::InvalidInit(
                "P is not an orthogonal projection".into(),
            ));
        }
        if (&q0 - q0.transpose()).norm() > 1e-12 {
            return Err(ComparisonError::InvalidInit("Q0 is not symmetric".into()));
        }
        if (&q0 * &p).norm() > 1e-12 {
            return Err(ComparisonError::InvalidInit(
                "image of P is not in the kernel of Q0".into(),
            ));
        }
        Ok(RiccatiInit { p, q0 })
    }

    /// `(0, Q0)`.
    pub fn regular(q0: DMatrix<f64>) -> Result<Self, ComparisonError> {
        let n = q0.nrows();
        RiccatiInit::new(DMatrix::zeros(n, n), q0)
    }

    /// `(Id, 0)`: distance to a point.
    pub fn point(n: usize) -> Self {
        RiccatiInit {
            p: DMatrix::identity(n, n),
            q0: DMatrix::zeros(n, n),
        }
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn q0(&self) -> &DMatrix<f64> {
        &self.q0
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    pub fn is_singular(&self) -> bool {
        self.p.norm() > 1e-12
    }

    pub fn is_convex(&self) -> bool {
        SymmetricEigen::new(self.q0.clone())
            .eigenvalues
            .iter()
            .all(|&e| e >= -1e-12)
    }

    /// Short content hash used to tag exported paths.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for v in self.p.iter().chain(self.q0.iter()) {
            h.update(v.to_le_bytes());
        }
        hex::encode(&h.finalize()[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_validation() {
        let p = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 0.0]);
        let q_ok = DMatrix::from_diagonal(&nalgebra::dvector![0.0, 0.4]);
        let q_bad = DMatrix::from_diagonal(&nalgebra::dvector![0.3, 0.4]);
        assert!(RiccatiInit::new(p.clone(), q_ok).is_ok());
        assert!(matches!(
            RiccatiInit::new(p, q_bad),
            Err(ComparisonError::InvalidInit(_))
        ));
        let not_proj = DMatrix::from_diagonal(&nalgebra::dvector![0.5, 0.0]);
        assert!(RiccatiInit::new(not_proj, DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn pinching_sampled() {
        let s = CurvatureProfile::sinusoidal(2);
        assert!(s.check_pinching(3.0, 300).is_ok());
        assert!(s.check_pinching(5.0, 500).is_err());
    }

    #[test]
    fn hash_is_stable() {
        let i = RiccatiInit::point(2);
        assert_eq!(i.hash(), RiccatiInit::point(2).hash());
        assert_ne!(i.hash(), RiccatiInit::point(3).hash());
        assert_eq!(i.hash().len(), 16);
    }
}
