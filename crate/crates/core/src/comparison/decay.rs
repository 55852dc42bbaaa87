use nalgebra::dvector;
use serde::{Deserialize, Serialize};

use super::jacobi::jacobi_solve;
use super::profile::CurvatureProfile;
use super::ComparisonError;
use crate::fit::log_slope;
use crate::geom::ConvexBody;

/// Geodesic curvature of the boundary of a disk or geodesic in the plane.
pub fn boundary_curvature(body: &ConvexBody) -> Result<f64, ComparisonError> {
    match body {
        ConvexBody::Disk { radius, .. } if *radius > 0.0 => Ok(1.0 / radius.tanh()),
        ConvexBody::Geodesic { .. } => Ok(0.0),
        _ => Err(ComparisonError::Unsupported(
            "transverse decay is implemented for disks of positive radius and geodesics".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    pub h: f64,
    /// Size of the derivative of the boundary shape operator along the
    /// boundary; zero for round disks and geodesics.
    pub shape_derivative: f64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            h: 0.01,
            shape_derivative: 0.0,
        }
    }
}

/// Quantities at one distance `r` from the body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecaySample {
    pub r: f64,
    /// `|J(0)|` for the normalization `|J(r)| = 1`.
    pub j0: f64,
    /// `∫₀ʳ |F||L| dt` with `L(0) = 1`, `L(r) = 0`.
    pub forcing_integral: f64,
    /// Certified upper bound on `|K^⊥(0)|`.
    pub envelope: f64,
    /// `K^⊥(0)` recovered from the boundary identity.
    pub kperp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub boundary_curvature: f64,
    pub samples: Vec<DecaySample>,
    pub envelope_slope: f64,
    pub j0_slope: f64,
    /// Fitted only when `K^⊥(0)` is nonzero.
    pub kperp_slope: Option<f64>,
}

fn integrate(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() - 1;
    let h = ts[1] - ts[0];
    if n % 2 == 0 {
        let mut s = ys[0] + ys[n];
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * ys[k];
        }
        s * h / 3.0
    } else {
        ys.windows(2).map(|w| (w[0] + w[1]) * h / 2.0).sum()
    }
}

/// One sample of the transverse-decay pipeline in curvature −1.
///
/// `J` solves the normal Jacobi equation with `J′(0) = κ J(0)` and is scaled
/// so that `|J(r)| = 1`. The forcing is `F = 4R(c′,J)J′`, which points along
/// `c′`, so `⟨F, L⟩` vanishes while the envelope uses `|F||L|`.
pub fn decay_sample(
    kappa: f64,
    r: f64,
    opts: DecayOptions,
) -> Result<DecaySample, ComparisonError> {
    let prof = CurvatureProfile::constant(1, 1.0)?;
    let jp = jacobi_solve(&prof, &dvector![1.0], &dvector![kappa], r, opts.h)?;
    let scale = 1.0 / jp.end().0[0];
    let y1 = jacobi_solve(&prof, &dvector![1.0], &dvector![0.0], r, opts.h)?;
    let y2 = jacobi_solve(&prof, &dvector![0.0], &dvector![1.0], r, opts.h)?;
    let shoot = -y1.end().0[0] / y2.end().0[0];
    let l: Vec<f64> = (0..y1.t.len())
        .map(|k| y1.j[k][0] + shoot * y2.j[k][0])
        .collect();
    let l0p = y1.jp[0][0] + shoot * y2.jp[0][0];
    let integrand: Vec<f64> = (0..jp.t.len())
        .map(|k| 4.0 * (scale * jp.j[k][0]).abs() * (scale * jp.jp[k][0]).abs() * l[k].abs())
        .collect();
    let forcing_integral = integrate(&jp.t, &integrand);
    let j0 = scale.abs();
    let rem = opts.shape_derivative * j0 * j0;
    // L′(0) = B L(0) with B < 0 the sphere's shape operator; B − S₀ < 0.
    let gap = kappa - l0p;
    let envelope = (forcing_integral + rem.abs()) / gap;
    let kperp = -rem / gap;
    Ok(DecaySample {
        r,
        j0,
        forcing_integral,
        envelope,
        kperp,
    })
}

/// Fits decay rates of the envelope, `|J(0)|` and `|K^⊥(0)|` against `r`.
pub fn transverse_decay_experiment(
    body: &ConvexBody,
    radii: &[f64],
    opts: DecayOptions,
) -> Result<DecayReport, ComparisonError> {
    if radii.len() < 3 {
        return Err(ComparisonError::TooFewSamples {
            got: radii.len(),
            need: 3,
        });
    }
    let kappa = boundary_curvature(body)?;
    let samples = radii
        .iter()
        .map(|&r| decay_sample(kappa, r, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let rs: Vec<f64> = samples.iter().map(|s| s.r).collect();
    let env: Vec<f64> = samples.iter().map(|s| s.envelope).collect();
    let j0: Vec<f64> = samples.iter().map(|s| s.j0).collect();
    let kp: Vec<f64> = samples.iter().map(|s| s.kperp.abs()).collect();
    let kperp_slope = if kp.iter().all(|&v| v > 0.0) {
        Some(log_slope(&rs, &kp)?)
    } else {
        None
    };
    Ok(DecayReport {
        boundary_curvature: kappa,
        envelope_slope: log_slope(&rs, &env)?,
        j0_slope: log_slope(&rs, &j0)?,
        kperp_slope,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Ideal, Point};
    use approx::assert_abs_diff_eq;

    #[test]
    fn j0_matches_closed_form() {
        let kappa = 1.0 / 1f64.tanh();
        for r in [2.0, 5.0] {
            let s = decay_sample(kappa, r, DecayOptions::default()).unwrap();
            let exact = 1.0 / (r.cosh() + kappa * r.sinh());
            assert_abs_diff_eq!(s.j0, exact, epsilon = 1e-9 * exact);
        }
    }

    #[test]
    fn disk_decay_rates() {
        let disk = ConvexBody::Disk {
            center: Point::I,
            radius: 1.0,
        };
        let radii: Vec<f64> = (2..=8).map(f64::from).collect();
        let rep = transverse_decay_experiment(&disk, &radii, DecayOptions::default()).unwrap();
        assert!(rep.envelope_slope <= -0.9, "{}", rep.envelope_slope);
        assert!(rep.j0_slope <= -1.0);
        assert!(rep.kperp_slope.is_none());
        assert!(rep.samples.iter().all(|s| s.kperp == 0.0));
    }

    #[test]
    fn shape_derivative_term_decays_faster() {
        let geo = ConvexBody::Geodesic {
            ends: [Ideal::Real(0.0), Ideal::Infinity],
        };
        let radii: Vec<f64> = (2..=8).map(f64::from).collect();
        let opts = DecayOptions {
            shape_derivative: 0.5,
            ..Default::default()
        };
        let rep = transverse_decay_experiment(&geo, &radii, opts).unwrap();
        assert!(rep.kperp_slope.unwrap() <= -0.9);
        assert!(rep.samples.iter().all(|s| s.kperp.abs() <= s.envelope));
    }

    #[test]
    fn short_range_is_rejected() {
        let disk = ConvexBody::Disk {
            center: Point::I,
            radius: 1.0,
        };
        let r = transverse_decay_experiment(&disk, &[2.0, 3.0], DecayOptions::default());
        assert!(matches!(
            r,
            Err(ComparisonError::TooFewSamples { got: 2, need: 3 })
        ));
    }
}
