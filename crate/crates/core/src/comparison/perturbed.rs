use nalgebra::{DMatrix, DVector};

use super::jacobi::integrate_stacked;
use super::ode::rk4;
use super::path::JacobiPath;
use super::profile::CurvatureProfile;
use super::ComparisonError;

/// Covariant-derivative forcing `∇R(c′,c′,J)J − ∇R(J,J,c′)c′`, given `(t, c′, J)`.
pub type NablaRForcing = dyn Fn(f64, &DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync;

/// `R(X,Y)Z = κ(⟨Y,Z⟩X − ⟨X,Z⟩Y)` for constant sectional curvature `κ`.
pub fn isotropic_curvature(
    kappa: f64,
    x: &DVector<f64>,
    y: &DVector<f64>,
    z: &DVector<f64>,
) -> DVector<f64> {
    (x * y.dot(z) - y * x.dot(z)) * kappa
}

/// Gronwall bound on `‖(K, K′)(1)‖` for `b|v| ≤ 1`.
pub fn gronwall_bound(b: f64, b_prime: f64, speed: f64, w_norm: f64) -> f64 {
    let w2 = w_norm * w_norm;
    (b * b * speed * w2 + 16.0 * (b.powi(3) + b_prime) * speed * speed * w2) * std::f64::consts::E
}

fn sectional(profile: &CurvatureProfile) -> Result<impl Fn(f64) -> f64 + '_, ComparisonError> {
    if profile.scalar_at(0.0).is_none() {
        return Err(ComparisonError::Unsupported(
            "perturbed Jacobi fields need an isotropic curvature profile".into(),
        ));
    }
    Ok(move |arclength: f64| -profile.scalar_at(arclength).expect("isotropic"))
}

fn velocity(m: usize, speed: f64) -> DVector<f64> {
    let mut v = DVector::zeros(m);
    v[0] = speed;
    v
}

/// Full-frame Jacobi field along `t ↦ c(t)` of constant speed `speed`.
///
/// Coordinate 0 is the direction of `c′`; the profile supplies the sectional
/// curvature as a function of arclength.
pub fn frame_jacobi_solve(
    profile: &CurvatureProfile,
    speed: f64,
    j0: &DVector<f64>,
    j0p: &DVector<f64>,
    t_end: f64,
    h: f64,
) -> Result<JacobiPath, ComparisonError> {
    let m = profile.dim() + 1;
    if j0.len() != m || j0p.len() != m {
        return Err(ComparisonError::Precondition(format!(
            "frame vectors must have dimension {m}"
        )));
    }
    let kappa = sectional(profile)?;
    let cp = velocity(m, speed);
    let rhs = move |t: f64, y: &DMatrix<f64>| frame_rhs(&kappa, &cp, speed, t, y, None);
    integrate_stacked(&rhs, j0, j0p, t_end, h)
}

fn frame_rhs(
    kappa: &dyn Fn(f64) -> f64,
    cp: &DVector<f64>,
    speed: f64,
    t: f64,
    y: &DMatrix<f64>,
    forcing: Option<&DVector<f64>>,
) -> DMatrix<f64> {
    let m = cp.len();
    let j: DVector<f64> = y.rows(0, m).column(0).into_owned();
    let jp: DVector<f64> = y.rows(m, m).column(0).into_owned();
    let mut acc = -isotropic_curvature(kappa(speed * t), &j, cp, cp);
    if let Some(f) = forcing {
        acc += f;
    }
    let mut out = DMatrix::zeros(2 * m, 1);
    out.rows_mut(0, m).copy_from(&jp);
    out.rows_mut(m, m).copy_from(&acc);
    out
}

/// Solves `K″ + R(K,c′)c′ = 4R(c′,J)J′ + ∇R-terms` on the grid of `jpath`.
///
/// `J` at RK4 half steps is recomputed from the node values by a half step
/// of the Jacobi equation. `nabla_r` requires a derivative bound on the profile.
pub fn perturbed_jacobi_solve(
    profile: &CurvatureProfile,
    speed: f64,
    jpath: &JacobiPath,
    k0: &DVector<f64>,
    k0p: &DVector<f64>,
    nabla_r: Option<&NablaRForcing>,
) -> Result<JacobiPath, ComparisonError> {
    if nabla_r.is_some() && profile.b_prime().is_none() {
        return Err(ComparisonError::MissingDerivativeBound);
    }
    let m = profile.dim() + 1;
    if k0.len() != m || k0p.len() != m || jpath.j.first().map(|v| v.len()) != Some(m) {
        return Err(ComparisonError::Precondition(format!(
            "frame vectors must have dimension {m}"
        )));
    }
    let kappa = sectional(profile)?;
    let cp = velocity(m, speed);
    let h = jpath.h;
    let forcing_at = |t: f64, j: &DVector<f64>, jp: &DVector<f64>| {
        let mut f = isotropic_curvature(kappa(speed * t), &cp, j, jp) * 4.0;
        if let Some(nr) = nabla_r {
            f += nr(t, &cp, j);
        }
        f
    };
    let jac_rhs = |t: f64, y: &DMatrix<f64>| frame_rhs(&kappa, &cp, speed, t, y, None);

    let mut y = DMatrix::zeros(2 * m, 1);
    y.rows_mut(0, m).copy_from(k0);
    y.rows_mut(m, m).copy_from(k0p);
    let mut out = JacobiPath {
        t: vec![0.0],
        j: vec![k0.clone()],
        jp: vec![k0p.clone()],
        h,
    };
    for k in 0..jpath.t.len().saturating_sub(1) {
        let t = jpath.t[k];
        let mut node = DMatrix::zeros(2 * m, 1);
        node.rows_mut(0, m).copy_from(&jpath.j[k]);
        node.rows_mut(m, m).copy_from(&jpath.jp[k]);
        let mid = rk4(&jac_rhs, t, &node, h / 2.0);
        let split = |s: &DMatrix<f64>| -> (DVector<f64>, DVector<f64>) {
            (
                s.rows(0, m).column(0).into_owned(),
                s.rows(m, m).column(0).into_owned(),
            )
        };
        let (jm, jpm) = split(&mid);
        let f0 = forcing_at(t, &jpath.j[k], &jpath.jp[k]);
        let fm = forcing_at(t + h / 2.0, &jm, &jpm);
        let f1 = forcing_at(t + h, &jpath.j[k + 1], &jpath.jp[k + 1]);
        let rhs = |s: f64, state: &DMatrix<f64>| {
            let rel = s - t;
            let f = if rel < h * 0.25 {
                &f0
            } else if rel < h * 0.75 {
                &fm
            } else {
                &f1
            };
            frame_rhs(&kappa, &cp, speed, s, state, Some(f))
        };
        y = rk4(&rhs, t, &y, h);
        let (kv, kpv) = split(&y);
        out.t.push(jpath.t[k + 1]);
        out.j.push(kv);
        out.jp.push(kpv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn hyperbolic() -> CurvatureProfile {
        CurvatureProfile::constant(1, 1.0).unwrap()
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let p = hyperbolic();
        let jpath =
            frame_jacobi_solve(&p, 0.8, &dvector![0.0, 0.0], &dvector![0.0, 0.0], 1.0, 0.01)
                .unwrap();
        let k = perturbed_jacobi_solve(
            &p,
            0.8,
            &jpath,
            &dvector![0.0, 0.0],
            &dvector![0.0, 0.0],
            None,
        )
        .unwrap();
        assert!(k.j.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn gronwall_bound_holds() {
        let p = hyperbolic();
        let speed = 1.0;
        let w = dvector![0.6, 0.8];
        let jpath = frame_jacobi_solve(&p, speed, &w, &dvector![0.0, 0.0], 1.0, 0.01).unwrap();
        let v = dvector![speed, 0.0];
        let k0p = isotropic_curvature(-1.0, &v, &w, &w);
        let k = perturbed_jacobi_solve(&p, speed, &jpath, &dvector![0.0, 0.0], &k0p, None).unwrap();
        let (kk, kp) = k.end();
        let norm = (kk.norm_squared() + kp.norm_squared()).sqrt();
        assert!(norm <= gronwall_bound(1.0, 0.0, speed, 1.0), "{norm}");
    }

    #[test]
    fn forcing_is_quadratic_in_j() {
        let p = hyperbolic();
        let solve = |lambda: f64| {
            let jpath = frame_jacobi_solve(
                &p,
                0.9,
                &dvector![0.0, lambda],
                &dvector![0.0, 0.3 * lambda],
                1.0,
                0.01,
            )
            .unwrap();
            perturbed_jacobi_solve(
                &p,
                0.9,
                &jpath,
                &dvector![0.0, 0.0],
                &dvector![0.0, 0.0],
                None,
            )
            .unwrap()
            .end()
            .0
            .clone()
        };
        let k1 = solve(1.0);
        let k3 = solve(3.0);
        assert!((k3 - k1.clone() * 9.0).norm() <= 1e-12 * (1.0 + k1.norm()));
        assert!(k1.norm() > 0.0);
    }

    #[test]
    fn nabla_terms_need_bound() {
        let p = CurvatureProfile::isotropic(1, 1.0, 1.0, |_| 1.0).unwrap();
        let jpath = frame_jacobi_solve(&p, 1.0, &dvector![0.0, 1.0], &dvector![0.0, 0.0], 1.0, 0.1)
            .unwrap();
        let f: Box<NablaRForcing> = Box::new(|_, _, j| j * 0.0);
        let r = perturbed_jacobi_solve(
            &p,
            1.0,
            &jpath,
            &dvector![0.0, 0.0],
            &dvector![0.0, 0.0],
            Some(f.as_ref()),
        );
        assert!(matches!(r, Err(ComparisonError::MissingDerivativeBound)));
    }

    #[test]
    fn refinement_self_oracle() {
        let p = hyperbolic();
        let run = |h: f64| {
            let jpath =
                frame_jacobi_solve(&p, 1.0, &dvector![0.0, 1.0], &dvector![0.0, 0.5], 1.0, h)
                    .unwrap();
            let k0p = dvector![0.0, 0.2];
            perturbed_jacobi_solve(&p, 1.0, &jpath, &dvector![0.0, 0.0], &k0p, None)
                .unwrap()
                .end()
                .0
                .clone()
        };
        let coarse = run(0.01);
        let fine = run(0.01 / 16.0);
        assert!((coarse - &fine).norm() / fine.norm() <= 1e-6);
    }
}
