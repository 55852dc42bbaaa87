use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::ode::{jacobi_rhs, rk4, uniform_grid};
use super::path::{OperatorPath, PathMeta};
use super::profile::{CurvatureProfile, RiccatiInit};
use super::ComparisonError;

/// Shape operator of the model solution in constant curvature `−curv²`
/// along one eigendirection of the initial condition.
///
/// `singular` selects an image-of-`P` direction, where the solution is
/// `curv·coth(curv·t)`; otherwise `kappa` is the initial eigenvalue.
pub fn model_shape_operator(
    kappa: f64,
    curv: f64,
    singular: bool,
    t: f64,
) -> Result<f64, ComparisonError> {
    if !(curv > 0.0) {
        return Err(ComparisonError::Precondition(format!(
            "curvature rate {curv} must be positive"
        )));
    }
    if singular {
        if t <= 0.0 {
            return Err(ComparisonError::Singular { t });
        }
        return Ok(curv / (curv * t).tanh());
    }
    if kappa < 0.0 || t < 0.0 {
        return Err(ComparisonError::Precondition(format!(
            "need kappa ≥ 0 and t ≥ 0, got {kappa}, {t}"
        )));
    }
    let (s, c) = ((curv * t).sinh(), (curv * t).cosh());
    Ok(curv * (s + kappa * c / curv) / (c + kappa * s / curv))
}

/// `(j₋′/j₋, j₊′/j₊)` with `j₋ = cosh(at) + κ₋ sinh(at)/a` and likewise for `b`.
pub fn fund_form_envelope(
    k_minus: f64,
    k_plus: f64,
    a: f64,
    b: f64,
    t: f64,
) -> Result<(f64, f64), ComparisonError> {
    if !(k_minus > 0.0 && k_minus <= k_plus) {
        return Err(ComparisonError::Precondition(format!(
            "need 0 < κ₋ ≤ κ₊, got {k_minus}, {k_plus}"
        )));
    }
    if !(a > 0.0 && a <= b) {
        return Err(ComparisonError::Precondition(format!(
            "need 0 < a ≤ b, got {a}, {b}"
        )));
    }
    Ok((
        model_shape_operator(k_minus, a, false, t)?,
        model_shape_operator(k_plus, b, false, t)?,
    ))
}

/// Options for [`riccati_solve_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiOptions {
    /// Start time for singular initial conditions.
    pub t0: f64,
    /// Norm at which the solution is declared to escape.
    pub blowup: f64,
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        RiccatiOptions {
            t0: 1e-4,
            blowup: 1e8,
        }
    }
}

pub fn riccati_solve(
    profile: &CurvatureProfile,
    init: &RiccatiInit,
    t_end: f64,
    h: f64,
) -> Result<OperatorPath, ComparisonError> {
    riccati_solve_with(profile, init, t_end, h, RiccatiOptions::default())
}

/// Integrates `S′ = K − S²` on `[0, T]` with fixed RK4 steps.
///
/// For singular `P` the solution starts at `t0` from the expansion
/// `S = P/t + Q0 + t·M` and reaches the first node with geometric substeps.
/// Steps with `‖S‖·h > 1/10` are bisected so an escape is caught near its
/// actual time.
pub fn riccati_solve_with(
    profile: &CurvatureProfile,
    init: &RiccatiInit,
    t_end: f64,
    h: f64,
    opts: RiccatiOptions,
) -> Result<OperatorPath, ComparisonError> {
    let n = profile.dim();
    if init.dim() != n {
        return Err(ComparisonError::InvalidInit(format!(
            "init has size {}, profile has dimension {n}",
            init.dim()
        )));
    }
    let (steps, h) = uniform_grid(t_end, h)?;
    let rhs = |t: f64, s: &DMatrix<f64>| profile.operator(t) - s * s;
    let meta = PathMeta {
        a: profile.a(),
        b: profile.b(),
        h,
        init_hash: init.hash(),
    };

    let mut ts = Vec::with_capacity(steps + 2);
    let mut vals = Vec::with_capacity(steps + 2);
    let mut s;
    if init.is_singular() {
        let t0 = opts.t0;
        if !(t0 > 0.0 && t0 < h) {
            return Err(ComparisonError::Precondition(format!(
                "singular start t0={t0} must lie in (0, h={h})"
            )));
        }
        s = singular_start(profile, init, t0);
        ts.push(t0);
        vals.push(s.clone());
        let mut t = t0;
        while t < h {
            let next = (t * 1.01).min(h);
            s = guarded_step(&rhs, t, &s, next - t, opts.blowup, 0)?;
            t = next;
        }
    } else {
        s = init.q0().clone();
        ts.push(0.0);
        vals.push(s.clone());
        s = guarded_step(&rhs, 0.0, &s, h, opts.blowup, 0)?;
    }
    ts.push(h);
    vals.push(s.clone());
    for k in 1..steps {
        let t = k as f64 * h;
        // Near a singular start the solution behaves like 1/t; keep substeps
        // at 1% of t until the grid step is that small anyway.
        let sub = if init.is_singular() {
            (h / (0.01 * t)).ceil().max(1.0) as usize
        } else {
            1
        };
        let dt = h / sub as f64;
        for j in 0..sub {
            s = guarded_step(&rhs, t + j as f64 * dt, &s, dt, opts.blowup, 0)?;
        }
        ts.push((k + 1) as f64 * h);
        vals.push(s.clone());
    }
    Ok(OperatorPath {
        t: ts,
        values: vals,
        h,
        meta,
    })
}

/// `P/t0 + Q0 + t0·M`, with `M` chosen so the expansion solves the equation
/// to first order: `M = K/3` on `im P`, `K/2` off-diagonal, `K − Q0²` on `ker P`.
fn singular_start(profile: &CurvatureProfile, init: &RiccatiInit, t0: f64) -> DMatrix<f64> {
    let n = init.dim();
    let p = init.p();
    let q = init.q0();
    let ker = DMatrix::identity(n, n) - p;
    let k = profile.operator(0.0);
    let m = p * &k * p / 3.0 + (p * &k * &ker + &ker * &k * p) / 2.0 + &ker * (&k - q * q) * &ker;
    p / t0 + q + m * t0
}

fn guarded_step<F>(
    f: &F,
    t: f64,
    s: &DMatrix<f64>,
    h: f64,
    blowup: f64,
    depth: u32,
) -> Result<DMatrix<f64>, ComparisonError>
where
    F: Fn(f64, &DMatrix<f64>) -> DMatrix<f64>,
{
    if s.norm() * h > 0.1 && depth < 64 {
        let mid = guarded_step(f, t, s, h / 2.0, blowup, depth + 1)?;
        return guarded_step(f, t + h / 2.0, &mid, h / 2.0, blowup, depth + 1);
    }
    let next = rk4(f, t, s, h);
    let norm = next.norm();
    if !norm.is_finite() || norm > blowup {
        return Err(ComparisonError::FiniteEscape { time: t + h });
    }
    Ok(next)
}

/// Shape operator recovered as `J′J⁻¹` from the matrix Jacobi solution with
/// `J(0) = 1 − P`, `J′(0) = P + Q0`. Nodes with `t > 0` only.
pub fn riccati_via_jacobi(
    profile: &CurvatureProfile,
    init: &RiccatiInit,
    t_end: f64,
    h: f64,
) -> Result<OperatorPath, ComparisonError> {
    let n = profile.dim();
    let (steps, h) = uniform_grid(t_end, h)?;
    let rhs = jacobi_rhs(|t| profile.operator(t), n);
    let mut y = DMatrix::zeros(2 * n, n);
    y.rows_mut(0, n)
        .copy_from(&(DMatrix::identity(n, n) - init.p()));
    y.rows_mut(n, n).copy_from(&(init.p() + init.q0()));
    let mut ts = Vec::with_capacity(steps);
    let mut vals = Vec::with_capacity(steps);
    for k in 0..steps {
        y = rk4(&rhs, k as f64 * h, &y, h);
        let j = y.rows(0, n).into_owned();
        let jp = y.rows(n, n).into_owned();
        let inv = j.try_inverse().ok_or(ComparisonError::Singular {
            t: (k + 1) as f64 * h,
        })?;
        ts.push((k + 1) as f64 * h);
        vals.push(jp * inv);
    }
    Ok(OperatorPath {
        t: ts,
        values: vals,
        h,
        meta: PathMeta {
            a: profile.a(),
            b: profile.b(),
            h,
            init_hash: init.hash(),
        },
    })
}

/// Model solution `S_curv(t)` for the initial condition, as a matrix.
pub fn model_solution(
    init: &RiccatiInit,
    curv: f64,
    t: f64,
) -> Result<DMatrix<f64>, ComparisonError> {
    let n = init.dim();
    let id = DMatrix::identity(n, n);
    let p = init.p();
    let ker = &id - p;
    let (s, c) = ((curv * t).sinh(), (curv * t).cosh());
    // Q0 and P commute, so the ker-P part is a rational function of Q0.
    let num = (&id * (curv * s) + init.q0() * c) * &ker;
    let den = &id * c + init.q0() * (s / curv);
    let den_inv = den.try_inverse().ok_or(ComparisonError::Singular { t })?;
    let mut out = &ker * num * den_inv * &ker;
    if init.is_singular() {
        if t <= 0.0 {
            return Err(ComparisonError::Singular { t });
        }
        out += p * (curv / (curv * t).tanh());
    }
    Ok(out)
}

/// Worst eigen-margins of `S − S_a` and `S_b − S` over the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margins {
    pub lower: f64,
    pub upper: f64,
    pub worst_lower_t: f64,
    pub worst_upper_t: f64,
}

pub fn comparison_margins(
    path: &OperatorPath,
    init: &RiccatiInit,
    a: f64,
    b: f64,
) -> Result<Margins, ComparisonError> {
    if !init.is_convex() {
        return Err(ComparisonError::Precondition(
            "Q0 must be positive semidefinite".into(),
        ));
    }
    let mut m = Margins {
        lower: f64::INFINITY,
        upper: f64::INFINITY,
        worst_lower_t: f64::NAN,
        worst_upper_t: f64::NAN,
    };
    for (t, s) in path.t.iter().zip(&path.values) {
        if init.is_singular() && *t <= 0.0 {
            continue;
        }
        let sa = model_solution(init, a, *t)?;
        let sb = model_solution(init, b, *t)?;
        let lo = min_eig(&(s - sa));
        let hi = min_eig(&(sb - s));
        if lo < m.lower {
            m.lower = lo;
            m.worst_lower_t = *t;
        }
        if hi < m.upper {
            m.upper = hi;
            m.worst_upper_t = *t;
        }
    }
    Ok(m)
}

pub(crate) fn min_eig(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn model_examples() {
        assert_abs_diff_eq!(
            model_shape_operator(1.3, 1.3, false, 2.7).unwrap(),
            1.3,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            model_shape_operator(0.0, 1.0, false, 1.0).unwrap(),
            1f64.tanh(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            model_shape_operator(0.0, 1.0, true, 1.0).unwrap(),
            1.0 / 1f64.tanh(),
            epsilon = 1e-15
        );
        assert!(matches!(
            model_shape_operator(0.0, 1.0, true, 0.0),
            Err(ComparisonError::Singular { .. })
        ));
    }

    #[test]
    fn envelope_examples() {
        let (lo, hi) = fund_form_envelope(0.3, 0.8, 1.0, 1.5, 0.0).unwrap();
        assert_eq!((lo, hi), (0.3, 0.8));
        let (lo, hi) = fund_form_envelope(0.5, 0.5, 1.0, 1.0, 40.0).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-12);
        assert!(fund_form_envelope(0.9, 0.5, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn stationary_and_tanh() {
        let prof = CurvatureProfile::constant(2, 0.7).unwrap();
        let init = RiccatiInit::regular(DMatrix::identity(2, 2) * 0.7).unwrap();
        let path = riccati_solve(&prof, &init, 3.0, 0.01).unwrap();
        assert!((path.last() - DMatrix::identity(2, 2) * 0.7).norm() < 1e-13);

        let prof = CurvatureProfile::constant(1, 1.0).unwrap();
        let init = RiccatiInit::regular(DMatrix::zeros(1, 1)).unwrap();
        let path = riccati_solve(&prof, &init, 1.0, 0.01).unwrap();
        assert_abs_diff_eq!(path.last()[(0, 0)], 1f64.tanh(), epsilon = 1e-9);
    }

    #[test]
    fn singular_start_reaches_coth() {
        let prof = CurvatureProfile::constant(1, 1.0).unwrap();
        let path = riccati_solve(&prof, &RiccatiInit::point(1), 1.0, 0.01).unwrap();
        assert_abs_diff_eq!(path.last()[(0, 0)], 1.0 / 1f64.tanh(), epsilon = 1e-9);
    }

    #[test]
    fn escape_time_is_reported() {
        let prof = CurvatureProfile::constant(1, 1.0).unwrap();
        let init = RiccatiInit::regular(DMatrix::from_element(1, 1, -2.0)).unwrap();
        match riccati_solve(&prof, &init, 2.0, 0.01) {
            Err(ComparisonError::FiniteEscape { time }) => {
                assert!((time - 0.5 * 3f64.ln()).abs() < 1e-4, "escape at {time}")
            }
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn jacobi_route_agrees() {
        let prof = CurvatureProfile::sinusoidal(2);
        let p = DMatrix::from_diagonal(&nalgebra::dvector![1.0, 0.0]);
        let q = DMatrix::from_diagonal(&nalgebra::dvector![0.0, 0.4]);
        let init = RiccatiInit::new(p, q).unwrap();
        let direct = riccati_solve(&prof, &init, 2.0, 0.01).unwrap();
        let via = riccati_via_jacobi(&prof, &init, 2.0, 0.01).unwrap();
        assert!((direct.last() - via.last()).norm() < 1e-8);
    }

    #[test]
    fn margins_for_constant_curvature_are_tight() {
        let prof = CurvatureProfile::constant(2, 1.0).unwrap();
        let init = RiccatiInit::regular(DMatrix::zeros(2, 2)).unwrap();
        let path = riccati_solve(&prof, &init, 3.0, 0.01).unwrap();
        let m = comparison_margins(&path, &init, 1.0, 1.5).unwrap();
        assert!(m.lower.abs() < 1e-9);
        assert!(m.upper >= -1e-12);
        let bad = RiccatiInit::regular(DMatrix::from_element(1, 1, -0.1)).unwrap();
        assert!(comparison_margins(&path, &bad, 1.0, 1.5).is_err());
    }
}
