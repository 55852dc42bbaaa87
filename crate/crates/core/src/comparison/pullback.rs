use serde::{Deserialize, Serialize};

use super::decay::boundary_curvature;
use super::ComparisonError;
use crate::geom::{log_map, project_convex, ConvexBody, Point};

/// A smooth function on the half-plane with its Euclidean partial derivatives.
pub trait ScalarField {
    fn value(&self, p: &Point) -> f64;
    fn gradient(&self, p: &Point) -> [f64; 2];
    fn hessian(&self, p: &Point) -> [[f64; 2]; 2];
}

/// Riemannian Hessian of `psi` in the half-plane metric `(dx² + dy²)/y²`.
pub fn covariant_hessian(psi: &dyn ScalarField, p: &Point) -> [[f64; 2]; 2] {
    let [gx, gy] = psi.gradient(p);
    let h = psi.hessian(p);
    let iy = 1.0 / p.y;
    // Γ^x_xy = −1/y, Γ^y_xx = 1/y, Γ^y_yy = −1/y
    let xy = h[0][1] + iy * gx;
    [[h[0][0] - iy * gy, xy], [xy, h[1][1] + iy * gy]]
}

/// Laplacian `−y²(f_xx + f_yy)` by central differences with step `h·y`.
pub fn fd_laplacian(f: impl Fn(&Point) -> f64, p: &Point, h: f64) -> f64 {
    let d = h * p.y;
    let at = |dx: f64, dy: f64| {
        f(&Point {
            x: p.x + dx,
            y: p.y + dy,
        })
    };
    let c = at(0.0, 0.0);
    let fxx = (at(d, 0.0) - 2.0 * c + at(-d, 0.0)) / (d * d);
    let fyy = (at(0.0, d) - 2.0 * c + at(0.0, -d)) / (d * d);
    -p.y * p.y * (fxx + fyy)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackTerms {
    /// `−∇²ψ(J(0), J(0))`.
    pub hessian_term: f64,
    /// `−dψ(K(0))`.
    pub gradient_term: f64,
    pub total: f64,
    pub r: f64,
}

/// Splits `Δ(ψ∘π)(x)` into its Hessian and gradient parts, where `π` is the
/// nearest-point projection onto a disk or geodesic.
pub fn hessian_pullback_defect(
    psi: &dyn ScalarField,
    body: &ConvexBody,
    x: &Point,
) -> Result<PullbackTerms, ComparisonError> {
    let kappa = boundary_curvature(body)?;
    let pr = project_convex(body, x)?;
    if pr.dist <= 0.0 {
        return Err(ComparisonError::Precondition(
            "point lies in the convex body".into(),
        ));
    }
    let r = pr.dist;
    let foot = pr.foot;
    let out = log_map(&foot, x);
    let on = out.norm_at(&foot);
    // Euclidean components of unit vectors at the foot (hyperbolic norm 1).
    let nu = [out.dx / on, out.dy / on];
    let tangent = [-nu[1], nu[0]];
    let speed = 1.0 / (r.cosh() + kappa * r.sinh());
    let j0 = [tangent[0] * speed, tangent[1] * speed];
    let k0 = [
        -kappa * speed * speed * nu[0],
        -kappa * speed * speed * nu[1],
    ];

    let hess = covariant_hessian(psi, &foot);
    let mut hj = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            hj += hess[i][j] * j0[i] * j0[j];
        }
    }
    let g = psi.gradient(&foot);
    let hessian_term = -hj;
    let gradient_term = -(g[0] * k0[0] + g[1] * k0[1]);
    Ok(PullbackTerms {
        hessian_term,
        gradient_term,
        total: hessian_term + gradient_term,
        r,
    })
}
