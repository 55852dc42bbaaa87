use nalgebra::{DMatrix, DVector};

use super::ode::{jacobi_rhs, rk4, uniform_grid};
use super::path::JacobiPath;
use super::profile::CurvatureProfile;
use super::ComparisonError;

/// Normal Jacobi field `J″ = K(t) J` with the given initial data.
pub fn jacobi_solve(
    profile: &CurvatureProfile,
    j0: &DVector<f64>,
    j0p: &DVector<f64>,
    t_end: f64,
    h: f64,
) -> Result<JacobiPath, ComparisonError> {
    let n = profile.dim();
    if j0.len() != n || j0p.len() != n {
        return Err(ComparisonError::Precondition(format!(
            "initial data must have dimension {n}"
        )));
    }
    let rhs = jacobi_rhs(|t| profile.operator(t), n);
    integrate_stacked(&rhs, j0, j0p, t_end, h)
}

/// RK4 on a stacked `(J, J′)` state, recording every node.
pub(crate) fn integrate_stacked<F>(
    rhs: &F,
    j0: &DVector<f64>,
    j0p: &DVector<f64>,
    t_end: f64,
    h: f64,
) -> Result<JacobiPath, ComparisonError>
where
    F: Fn(f64, &DMatrix<f64>) -> DMatrix<f64>,
{
    let n = j0.len();
    let (steps, h) = uniform_grid(t_end, h)?;
    let mut y = DMatrix::zeros(2 * n, 1);
    y.rows_mut(0, n).copy_from(j0);
    y.rows_mut(n, n).copy_from(j0p);
    let mut path = JacobiPath {
        t: Vec::with_capacity(steps + 1),
        j: Vec::with_capacity(steps + 1),
        jp: Vec::with_capacity(steps + 1),
        h,
    };
    let mut push = |t: f64, y: &DMatrix<f64>| {
        path.t.push(t);
        path.j.push(y.rows(0, n).column(0).into_owned());
        path.jp.push(y.rows(n, n).column(0).into_owned());
    };
    push(0.0, &y);
    for k in 0..steps {
        y = rk4(rhs, k as f64 * h, &y, h);
        push((k + 1) as f64 * h, &y);
    }
    Ok(path)
}
