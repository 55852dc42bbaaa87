use serde::{Deserialize, Serialize};

use super::warped::WarpedEnd;
use super::SpectralError;

/// Residuals of traveling quasi-modes for `−d²/dt² + W − λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub lambda: f64,
    pub widths: Vec<f64>,
    pub centers: Vec<f64>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub certified: bool,
}

pub const DEFAULT_WIDTHS: [f64; 4] = [250.0, 500.0, 1000.0, 2000.0];

/// `u_j(t) = χ_j(t) cos(k t)`, `k = √(λ − ¼)`, with `χ_j` a `cos⁴` bump of
/// width `L_j` centered at `L_j`, so the supports leave every compact set.
/// The residual `‖(−d²/dt² + W − λ)u_j‖ / ‖u_j‖` uses closed-form
/// derivatives and trapezoid quadrature.
pub fn weyl_sequence(
    end: &WarpedEnd,
    lambda: f64,
    widths: &[f64],
    tol: f64,
) -> Result<WeylReport, SpectralError> {
    if !(lambda >= 0.25) || !lambda.is_finite() {
        return Err(SpectralError::Sequence(format!(
            "quasi-modes need λ ≥ 1/4, got {lambda}"
        )));
    }
    if widths.is_empty() || widths.iter().any(|w| !(*w > 0.0)) {
        return Err(SpectralError::Sequence("widths must be positive".into()));
    }
    let k = (lambda - 0.25).sqrt();
    let mut centers = Vec::new();
    let mut residuals = Vec::new();
    for &width in widths {
        let center = width;
        let a = center - 0.5 * width;
        // about 40 nodes per oscillation and per unit length
        let n = ((width * (1.0 + k) * 40.0).ceil() as usize).max(1000);
        let h = width / n as f64;
        let p = std::f64::consts::PI / width;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 1..n {
            let t = a + i as f64 * h;
            let (sn, cs) = (p * (t - center)).sin_cos();
            let c2 = cs * cs;
            let chi = c2 * c2;
            let d1 = -4.0 * p * c2 * cs * sn;
            let d2 = p * p * (12.0 * c2 * sn * sn - 4.0 * c2 * c2);
            let (s, c) = (k * t).sin_cos();
            let u = chi * c;
            let r = -d2 * c + 2.0 * k * d1 * s + (end.potential(t) - 0.25) * u;
            num += r * r;
            den += u * u;
        }
        centers.push(center);
        residuals.push((num / den).sqrt());
    }
    let certified =
        residuals.last().is_some_and(|r| *r <= tol) && residuals.windows(2).all(|w| w[1] <= w[0]);
    Ok(WeylReport {
        lambda,
        widths: widths.to_vec(),
        centers,
        residuals,
        tolerance: tol,
        certified,
    })
}
