use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::algebra::LieAlgebra;
use super::cartan::CartanSplit;
use super::rep::{isotropy_matrix, Representation};
use super::CasimirError;

const COMPAT_TOL: f64 = 1e-10;

/// Outcome of checking a symbol `σ_0 : 𝔭 → End(E_0)` against `π`.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolReport {
    /// `max ‖σ_0(Ad_k X) π(k) − π(k) σ_0(X)‖`.
    pub equivariance_defect: f64,
    /// `max ‖σ_0(X) π(k) − π(k) σ_0(X)‖`; zero only when σ_0 commutes with `π(K)`.
    pub commutation_defect: f64,
    pub compatible: bool,
    /// Smallest singular value of `σ_0(X)` over the sampled unit sphere.
    pub min_singular_value: f64,
    pub elliptic: bool,
    pub violations: Vec<String>,
}

/// Deterministic points on the unit sphere of `ℝ^n`.
fn sphere_samples(n: usize, count: usize) -> Vec<DVector<f64>> {
    if n == 1 {
        return vec![
            DVector::from_element(1, 1.0),
            DVector::from_element(1, -1.0),
        ];
    }
    if n == 2 {
        return (0..count)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / count as f64;
                DVector::from_vec(vec![t.cos(), t.sin()])
            })
            .collect();
    }
    // Weyl sequence pushed through the inverse of a symmetric map to [-1, 1]
    let alphas: Vec<f64> = (0..n).map(|k| ((k + 2) as f64).sqrt().fract()).collect();
    (1..=count)
        .filter_map(|i| {
            let v = DVector::from_fn(n, |k, _| 2.0 * (i as f64 * alphas[k]).fract() - 1.0);
            let nv = v.norm();
            (nv > 1e-6).then(|| v / nv)
        })
        .collect()
}

pub fn symbol_compat_check(
    alg: &LieAlgebra,
    split: &CartanSplit,
    rep: &Representation,
    sigma0: &[DMatrix<f64>],
    params: &[f64],
    sphere: usize,
) -> Result<SymbolReport, CasimirError> {
    if sigma0.len() != split.dim_p() {
        return Err(CasimirError::Dimension(format!(
            "{} symbol matrices for dim 𝔭 = {}",
            sigma0.len(),
            split.dim_p()
        )));
    }
    for (i, s) in sigma0.iter().enumerate() {
        if s.nrows() != rep.dim() || s.ncols() != rep.dim() {
            return Err(CasimirError::Dimension(format!(
                "σ_0(X_{i}) has the wrong size"
            )));
        }
        if (s.transpose() * rep.gram() + rep.gram() * s).amax() > COMPAT_TOL * s.amax().max(1.0) {
            return Err(CasimirError::NotSkew(i));
        }
    }
    let sigma = |c: &DVector<f64>| {
        let mut m = DMatrix::zeros(rep.dim(), rep.dim());
        for (s, ci) in sigma0.iter().zip(c.iter()) {
            m += s * *ci;
        }
        m
    };
    let mut violations = Vec::new();
    let (mut equivariance_defect, mut commutation_defect) = (0.0f64, 0.0f64);
    for (j, y) in split.k().iter().enumerate() {
        let py = rep.image(y)?;
        let ady = isotropy_matrix(alg, split, y);
        for &t in params {
            let pk = (&py * t).exp();
            let adk = (&ady * t).exp();
            for i in 0..split.dim_p() {
                let e = DVector::from_fn(split.dim_p(), |k, _| if k == i { 1.0 } else { 0.0 });
                let eq = (sigma(&(&adk * &e)) * &pk - &pk * &sigma0[i]).amax();
                let cm = (&sigma0[i] * &pk - &pk * &sigma0[i]).amax();
                if eq > COMPAT_TOL {
                    violations.push(format!(
                        "equivariance fails by {eq:.3e} at Y_{j}, t = {t}, X_{i}"
                    ));
                }
                equivariance_defect = equivariance_defect.max(eq);
                commutation_defect = commutation_defect.max(cm);
            }
        }
    }
    let mut min_singular_value = f64::INFINITY;
    for x in sphere_samples(split.dim_p(), sphere.max(1)) {
        let sv = sigma(&x)
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        min_singular_value = min_singular_value.min(sv);
    }
    let elliptic = min_singular_value > 1e-8;
    if !elliptic {
        violations.push(format!(
            "σ_0 is singular on the sampled sphere (σ_min = {min_singular_value:.3e})"
        ));
    }
    Ok(SymbolReport {
        equivariance_defect,
        commutation_defect,
        compatible: equivariance_defect <= COMPAT_TOL,
        min_singular_value,
        elliptic,
        violations,
    })
}

/// Clifford symbol `X ↦ Σ x_i e_i` on the spinor representation.
pub fn clifford_symbol() -> Vec<DMatrix<f64>> {
    super::rep::clifford_units().to_vec()
}

/// Covariant derivative of `[g e^{tZ}, u(t)]` at `t = 0` in the fiber over
/// `g x_0`: `u′(0) + π_*(Z_𝔨) u(0)`.
pub fn covariant_derivative_rule(
    split: &CartanSplit,
    rep: &Representation,
    z: &DVector<f64>,
    u0: &DVector<f64>,
    du0: &DVector<f64>,
) -> Result<DVector<f64>, CasimirError> {
    if u0.len() != rep.dim() || du0.len() != rep.dim() {
        return Err(CasimirError::Dimension(
            "curve values must live in E_0".into(),
        ));
    }
    let xk = split.k_part(z);
    Ok(du0 + rep.image(&xk)? * u0)
}
