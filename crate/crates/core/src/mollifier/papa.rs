use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::Model;
use super::smooth::Mollifier;
use super::target::TargetFn;
use super::MollifierError;
use crate::comparison::fund_form_envelope;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PapaParams {
    /// Lower bound on the boundary's second fundamental form.
    pub alpha: f64,
    /// Upper bound on the boundary's second fundamental form.
    pub beta: f64,
    /// Width of the neighbourhood where the curvature derivative is bounded.
    pub rho: f64,
    /// Allowed thickening of the body.
    pub eta: f64,
    /// Level `δ′` of the smoothed distance; defaults to `η/2`.
    pub level: Option<f64>,
    pub samples: usize,
    /// Smallest acceptable `|∇f_κ|` on the level curve.
    pub gradient_threshold: f64,
}

impl PapaParams {
    pub fn for_disk(curvature: f64, eta: f64) -> Self {
        PapaParams {
            alpha: curvature,
            beta: curvature,
            rho: 1.0,
            eta,
            level: None,
            samples: 256,
            gradient_threshold: 1e-3,
        }
    }
}

/// Closed polyline in chart coordinates, counter-clockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelCurve {
    pub points: Vec<Complex64>,
}

impl LevelCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y\n");
        for p in &self.points {
            s.push_str(&format!("{},{}\n", p.re, p.im));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PapaReport {
    pub kappa: f64,
    pub level: f64,
    pub retries: usize,
    pub curvature_min: f64,
    pub curvature_max: f64,
    /// Comparison envelope for the level at distance `δ′` from the body.
    pub envelope: [f64; 2],
    pub strictly_convex: bool,
    /// `min f` on the curve; nonnegative when the body is enclosed.
    pub inner_margin: f64,
    /// `η − max f` on the curve; nonnegative inside the `η`-neighbourhood.
    pub outer_margin: f64,
    /// `max |f − δ′|` on the curve, against the bound `ℓκ` with `ℓ = 1`.
    pub level_deviation: f64,
    pub gradient_min: f64,
    /// Standard deviation of the distance from the interior point.
    pub radius_spread: f64,
}

impl PapaReport {
    pub fn within_envelope(&self, slack: f64) -> bool {
        self.curvature_min >= self.envelope[0] - slack
            && self.curvature_max <= self.envelope[1] + slack
    }
}

/// Envelope of the second fundamental form at distance `t` from a boundary
/// with bounds `[alpha, beta]`, in constant curvature `−b²`.
pub fn shape_envelope(
    model: Model,
    alpha: f64,
    beta: f64,
    t: f64,
) -> Result<[f64; 2], MollifierError> {
    match model {
        Model::Euclidean => Ok([alpha / (1.0 + alpha * t), beta / (1.0 + beta * t)]),
        Model::Hyperbolic => {
            let (lo, hi) = fund_form_envelope(alpha, beta, 1.0, 1.0, t)
                .map_err(|e| MollifierError::Precondition(e.to_string()))?;
            Ok([lo, hi])
        }
    }
}

fn root_on_ray(
    moll: &Mollifier,
    f: &dyn TargetFn,
    center: Complex64,
    theta: f64,
    level: f64,
) -> Result<f64, MollifierError> {
    let model = moll.model();
    let g = |s: f64| -> Result<f64, MollifierError> {
        Ok(moll.smooth(f, model.point_at(center, theta, s))? - level)
    };
    let (mut lo, mut glo) = (0.0, g(0.0)?);
    if glo >= 0.0 {
        return Err(MollifierError::Precondition(
            "the interior point is not inside the sublevel set".into(),
        ));
    }
    let mut hi = 0.05;
    let mut ghi = g(hi)?;
    let mut grow = 0;
    while ghi <= 0.0 {
        lo = hi;
        glo = ghi;
        hi *= 1.6;
        ghi = g(hi)?;
        grow += 1;
        if grow > 60 {
            return Err(MollifierError::Root(format!(
                "no crossing of the level {level} along direction {theta}"
            )));
        }
    }
    // Illinois variant of regula falsi
    let mut side = 0i8;
    for _ in 0..200 {
        let s = (lo * ghi - hi * glo) / (ghi - glo);
        let gs = g(s)?;
        if gs == 0.0 || (hi - lo) < 1e-14 * hi.max(1.0) {
            return Ok(s);
        }
        if gs > 0.0 {
            hi = s;
            ghi = gs;
            if side == 1 {
                glo /= 2.0;
            }
            side = 1;
        } else {
            lo = s;
            glo = gs;
            if side == -1 {
                ghi /= 2.0;
            }
            side = -1;
        }
        if gs.abs() < 1e-15 {
            return Ok(s);
        }
    }
    Ok((lo * ghi - hi * glo) / (ghi - glo))
}

/// Geodesic curvature at each vertex of a closed counter-clockwise polyline,
/// from the circumscribed circle of neighbouring vertices.
pub fn polyline_curvature(model: Model, pts: &[Complex64]) -> Vec<f64> {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let (a, b, c) = (pts[(k + n - 1) % n], pts[k], pts[(k + 1) % n]);
            let (u, v, w) = (b - a, c - b, c - a);
            let cross = u.re * v.im - u.im * v.re;
            let ke = 2.0 * cross / (u.norm() * v.norm() * w.norm());
            let tangent = w / w.norm();
            let outward = -Complex64::i() * tangent;
            let dlog = match model {
                Model::Euclidean => 0.0,
                Model::Hyperbolic => {
                    let g = b * (2.0 / (1.0 - b.norm_sqr()));
                    g.re * outward.re + g.im * outward.im
                }
            };
            (ke + dlog) / model.conformal_factor(b)
        })
        .collect()
}

/// Smooths the distance to a convex body, extracts `{f_κ = δ′}` by root
/// finding along rays from an interior point, and measures the curve.
pub fn papa_pipeline(
    moll: &Mollifier,
    f: &dyn TargetFn,
    interior: Complex64,
    params: &PapaParams,
) -> Result<(PapaReport, LevelCurve), MollifierError> {
    let p = params;
    if !(p.alpha > 0.0 && p.alpha <= p.beta) {
        return Err(MollifierError::Precondition(format!(
            "need 0 < α ≤ β, got {}, {}",
            p.alpha, p.beta
        )));
    }
    if !(p.eta > 0.0 && p.eta < p.alpha.min(p.rho)) {
        return Err(MollifierError::Precondition(format!(
            "need 0 < η < min(α, ρ), got η = {}",
            p.eta
        )));
    }
    if p.samples < 8 {
        return Err(MollifierError::InvalidConfig(
            "at least 8 curve samples are needed".into(),
        ));
    }
    let kappa = moll.config().kappa;
    let model = moll.model();
    let base_level = p.level.unwrap_or(p.eta / 2.0);
    if !(base_level > 0.0 && base_level < p.eta) {
        return Err(MollifierError::Precondition(format!(
            "level {base_level} must lie in (0, η)"
        )));
    }
    if kappa > base_level / 2.0 {
        return Err(MollifierError::Precondition(format!(
            "κ = {kappa} is too large for the level {base_level}"
        )));
    }
    for retry in 0..4 {
        let level = base_level * (1.0 + 0.01 * retry as f64);
        let pts: Vec<Complex64> = (0..p.samples)
            .map(|j| {
                let theta = TAU * j as f64 / p.samples as f64;
                root_on_ray(moll, f, interior, theta, level)
                    .map(|s| model.point_at(interior, theta, s))
            })
            .collect::<Result<_, _>>()?;
        let mut gradient_min = f64::INFINITY;
        for &z in &pts {
            let g = moll.smooth_gradient(f, z)?;
            gradient_min = gradient_min.min(g[0].hypot(g[1]));
        }
        if gradient_min < p.gradient_threshold {
            continue;
        }
        let curv = polyline_curvature(model, &pts);
        let curvature_min = curv.iter().copied().fold(f64::INFINITY, f64::min);
        let curvature_max = curv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let fvals: Vec<f64> = pts.iter().map(|&z| f.value(z)).collect();
        let radii: Vec<f64> = pts.iter().map(|&z| model.distance(interior, z)).collect();
        let mean = radii.iter().sum::<f64>() / radii.len() as f64;
        let var = radii.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / radii.len() as f64;
        let report = PapaReport {
            kappa,
            level,
            retries: retry,
            curvature_min,
            curvature_max,
            envelope: shape_envelope(model, p.alpha, p.beta, level)?,
            strictly_convex: curvature_min > 0.0,
            inner_margin: fvals.iter().copied().fold(f64::INFINITY, f64::min),
            outer_margin: p.eta - fvals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            level_deviation: fvals.iter().map(|v| (v - level).abs()).fold(0.0, f64::max),
            gradient_min,
            radius_spread: var.sqrt(),
        };
        return Ok((report, LevelCurve { points: pts }));
    }
    Err(MollifierError::NotRegular { level: base_level })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollifier::model::Frame;
    use crate::mollifier::smooth::MollifierConfig;
    use crate::mollifier::target::DiskDistance;

    #[test]
    fn circle_curvatures() {
        let pts: Vec<Complex64> = (0..400)
            .map(|k| Complex64::from_polar(0.5, TAU * k as f64 / 400.0))
            .collect();
        let e = polyline_curvature(Model::Euclidean, &pts);
        assert!(e.iter().all(|k| (k - 2.0).abs() < 1e-4));
        // Euclidean radius tanh(s/2) is a hyperbolic circle of radius s
        let s = 2.0 * 0.5f64.atanh();
        let h = polyline_curvature(Model::Hyperbolic, &pts);
        assert!(h.iter().all(|k| (k - 1.0 / s.tanh()).abs() < 1e-4));
    }

    #[test]
    fn hyperbolic_disk_pipeline() {
        let f = DiskDistance::new(Model::Hyperbolic, Complex64::default(), 1.0).unwrap();
        let moll = Mollifier::new(
            Model::Hyperbolic,
            Frame::coordinate(),
            MollifierConfig {
                kappa: 0.04,
                radial_order: 8,
                angular_order: 16,
                ..Default::default()
            },
        )
        .unwrap();
        let params = PapaParams {
            samples: 128,
            ..PapaParams::for_disk(f.boundary_curvature(), 0.3)
        };
        let (r, curve) = papa_pipeline(&moll, &f, Complex64::default(), &params).unwrap();
        assert_eq!(curve.points.len(), 128);
        assert!(r.strictly_convex && r.curvature_min > 1.0);
        assert!(r.within_envelope(0.1), "{r:?}");
        assert!(r.inner_margin > 0.0 && r.outer_margin > 0.0);
        assert!(r.level_deviation <= 0.04);
        assert!(r.radius_spread < 1e-6);
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let f = DiskDistance::new(Model::Euclidean, Complex64::default(), 1.0).unwrap();
        let moll = Mollifier::new(
            Model::Euclidean,
            Frame::coordinate(),
            MollifierConfig {
                kappa: 0.2,
                ..Default::default()
            },
        )
        .unwrap();
        let p = PapaParams::for_disk(1.0, 0.3);
        assert!(matches!(
            papa_pipeline(&moll, &f, Complex64::default(), &p),
            Err(MollifierError::Precondition(_))
        ));
        let p = PapaParams::for_disk(1.0, 1.5);
        assert!(papa_pipeline(&moll, &f, Complex64::default(), &p).is_err());
    }
}
