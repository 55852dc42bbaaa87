use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::grid::Grid1D;
use super::section::Section1D;
use super::LocalizationError;

type PotentialFn = dyn Fn(f64) -> DMatrix<f64> + Send + Sync;

/// Laplace-type operator `A = −d²/dx² + B` on `ℝ^k`-valued functions, with
/// `B = σ d/dx + V(x)`, `σ` skew and `V` symmetric.
#[derive(Clone)]
pub struct LocalizedOperator {
    sigma: DMatrix<f64>,
    potential: Arc<PotentialFn>,
    c0: f64,
}

impl fmt::Debug for LocalizedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalizedOperator")
            .field("sigma", &self.sigma)
            .field("c0", &self.c0)
            .finish_non_exhaustive()
    }
}

impl LocalizedOperator {
    /// `c0` is a lower bound for the potential: `V ≥ −c0`.
    pub fn new(
        sigma: DMatrix<f64>,
        potential: impl Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
        c0: f64,
    ) -> Result<Self, LocalizationError> {
        if !sigma.is_square() || (&sigma + sigma.transpose()).norm() > 1e-12 {
            return Err(LocalizationError::InvalidOperator(
                "first-order coefficient must be skew".into(),
            ));
        }
        if !c0.is_finite() {
            return Err(LocalizationError::InvalidOperator(
                "potential bound must be finite".into(),
            ));
        }
        Ok(LocalizedOperator {
            sigma,
            potential: Arc::new(potential),
            c0,
        })
    }

    /// `−d²/dx²` on `ℝ^k`.
    pub fn laplacian(k: usize) -> Self {
        LocalizedOperator {
            sigma: DMatrix::zeros(k, k),
            potential: Arc::new(move |_| DMatrix::zeros(k, k)),
            c0: 0.0,
        }
    }

    /// Scalar Schrödinger operator `−d²/dx² + V`.
    pub fn schrodinger(v: impl Fn(f64) -> f64 + Send + Sync + 'static, c0: f64) -> Self {
        LocalizedOperator {
            sigma: DMatrix::zeros(1, 1),
            potential: Arc::new(move |x| DMatrix::from_element(1, 1, v(x))),
            c0,
        }
    }

    /// `s J d/dx − c0` on `ℝ²`, `J` the quarter turn; its symbol norm is `|s|`.
    pub fn rotating(s: f64, c0: f64) -> Self {
        let sigma = DMatrix::from_row_slice(2, 2, &[0.0, -s, s, 0.0]);
        LocalizedOperator {
            sigma,
            potential: Arc::new(move |_| DMatrix::identity(2, 2) * -c0),
            c0,
        }
    }

    pub fn fiber(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// `‖σ_B‖∞`, the spectral norm of the first-order coefficient.
    pub fn symbol_norm(&self) -> f64 {
        spectral_norm(&self.sigma)
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn potential(&self, x: f64) -> DMatrix<f64> {
        (self.potential)(x)
    }

    /// `B u = σ u′ + V u` at one point.
    pub fn first_order(&self, x: f64, u: &DVector<f64>, du: &DVector<f64>) -> DVector<f64> {
        &self.sigma * du + self.potential(x) * u
    }

    /// `A u = −u″ + σ u′ + V u` at one point.
    pub fn apply(
        &self,
        x: f64,
        u: &DVector<f64>,
        du: &DVector<f64>,
        ddu: &DVector<f64>,
    ) -> DVector<f64> {
        self.first_order(x, u, du) - ddu
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// First-order operator `A u = σ u′ + W(x) u`.
#[derive(Clone)]
pub struct FirstOrderOperator {
    pub sigma: DMatrix<f64>,
    potential: Arc<PotentialFn>,
}

impl fmt::Debug for FirstOrderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FirstOrderOperator")
            .field("sigma", &self.sigma)
            .finish_non_exhaustive()
    }
}

impl FirstOrderOperator {
    pub fn new(
        sigma: DMatrix<f64>,
        potential: impl Fn(f64) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        FirstOrderOperator {
            sigma,
            potential: Arc::new(potential),
        }
    }

    /// `d/dx` on scalars.
    pub fn derivative() -> Self {
        FirstOrderOperator::new(DMatrix::identity(1, 1), |_| DMatrix::zeros(1, 1))
    }

    pub fn symbol_norm(&self) -> f64 {
        spectral_norm(&self.sigma)
    }

    pub fn apply(&self, x: f64, u: &DVector<f64>, du: &DVector<f64>) -> DVector<f64> {
        &self.sigma * du + (self.potential)(x) * u
    }
}

/// Energy `‖u′‖² + ⟨Bu, u⟩` by quadrature.
pub(crate) fn energy(
    grid: &Grid1D,
    op: &LocalizedOperator,
    u: &[DVector<f64>],
    du: &[DVector<f64>],
) -> f64 {
    let vals: Vec<f64> = grid
        .nodes()
        .enumerate()
        .map(|(k, x)| du[k].norm_squared() + op.first_order(x, &u[k], &du[k]).dot(&u[k]))
        .collect();
    grid.integrate(&vals)
}

pub(crate) fn mass(grid: &Grid1D, u: &[DVector<f64>]) -> f64 {
    let vals: Vec<f64> = u.iter().map(|v| v.norm_squared()).collect();
    grid.integrate(&vals)
}

/// Rayleigh quotient `(‖∇u‖² + ⟨Bu,u⟩)/‖u‖²`.
pub fn rayleigh(
    grid: &Grid1D,
    u: &Section1D,
    op: &LocalizedOperator,
) -> Result<f64, LocalizationError> {
    u.check_grid(grid)?;
    let m = mass(grid, &u.values);
    if !(m > 0.0) {
        return Err(LocalizationError::ZeroSection);
    }
    Ok(energy(grid, op, &u.values, &u.derivative(grid)) / m)
}

/// Lower bound `−(c0 + σ²)` for the quadratic form of `Δ + B` with
/// `‖σ_B‖∞ ≤ σ` and potential `≥ −c0`.
pub fn operator_lower_bound(c0: f64, sigma: f64) -> f64 {
    -(c0 + sigma * sigma)
}

/// Smallest eigenvalue of the Dirichlet discretization of the quadratic
/// form of `op` on the interior nodes of `grid`.
pub fn discrete_form_minimum(grid: &Grid1D, op: &LocalizedOperator) -> f64 {
    let k = op.fiber();
    let n = grid.len() - 2;
    let h = grid.h();
    let mut m = DMatrix::<f64>::zeros(n * k, n * k);
    let sig = op.sigma();
    for i in 0..n {
        let x = grid.node(i + 1);
        let v = op.potential(x);
        for a in 0..k {
            m[(i * k + a, i * k + a)] += 2.0 / (h * h);
            if i + 1 < n {
                m[(i * k + a, (i + 1) * k + a)] -= 1.0 / (h * h);
                m[((i + 1) * k + a, i * k + a)] -= 1.0 / (h * h);
            }
            for b in 0..k {
                m[(i * k + a, i * k + b)] += 0.5 * (v[(a, b)] + v[(b, a)]);
                // ⟨σ u′, u⟩ with central differences, symmetrized below.
                if i + 1 < n {
                    m[(i * k + a, (i + 1) * k + b)] += sig[(a, b)] / (2.0 * h);
                }
                if i > 0 {
                    m[(i * k + a, (i - 1) * k + b)] -= sig[(a, b)] / (2.0 * h);
                }
            }
        }
    }
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Rayleigh quotients of a fixed bump translated along the grid.
pub fn moving_window_rayleigh(
    grid: &Grid1D,
    op: &LocalizedOperator,
    bump: &dyn Fn(f64) -> crate::localization::SectionFn,
    centers: &[f64],
) -> Result<Vec<f64>, LocalizationError> {
    centers
        .iter()
        .map(|&c| rayleigh(grid, &Section1D::sample(grid, &bump(c)), op))
        .collect()
}
