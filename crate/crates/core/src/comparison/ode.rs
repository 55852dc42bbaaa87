use nalgebra::DMatrix;

use super::ComparisonError;

/// One classical fourth-order Runge–Kutta step.
pub(crate) fn rk4<F>(f: &F, t: f64, y: &DMatrix<f64>, h: f64) -> DMatrix<f64>
where
    F: Fn(f64, &DMatrix<f64>) -> DMatrix<f64>,
{
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &(y + &k1 * (h / 2.0)));
    let k3 = f(t + h / 2.0, &(y + &k2 * (h / 2.0)));
    let k4 = f(t + h, &(y + &k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Uniform grid on `[0, T]`: number of steps and the effective step.
pub(crate) fn uniform_grid(t_end: f64, h: f64) -> Result<(usize, f64), ComparisonError> {
    if !(t_end > 0.0 && t_end.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return Err(ComparisonError::Grid(format!(
            "need T > 0 and h > 0, got T={t_end}, h={h}"
        )));
    }
    let ratio = t_end / h;
    let n = if (ratio - ratio.round()).abs() <= 1e-9 * ratio {
        ratio.round()
    } else {
        ratio.ceil()
    };
    if n > 1e7 {
        return Err(ComparisonError::Grid(format!(
            "{n} steps exceed the desk-scale limit"
        )));
    }
    let n = (n as usize).max(1);
    Ok((n, t_end / n as f64))
}

/// Jacobi system `(J, J′)′ = (J′, K(t) J)` on stacked `2n × m` states.
pub(crate) fn jacobi_rhs<'a>(
    op: impl Fn(f64) -> DMatrix<f64> + 'a,
    n: usize,
) -> impl Fn(f64, &DMatrix<f64>) -> DMatrix<f64> + 'a {
    move |t, y| {
        let m = y.ncols();
        let j = y.rows(0, n);
        let jp = y.rows(n, n);
        let mut out = DMatrix::zeros(2 * n, m);
        out.rows_mut(0, n).copy_from(&jp);
        out.rows_mut(n, n).copy_from(&(op(t) * j));
        out
    }
}
