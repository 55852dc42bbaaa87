use std::f64::consts::TAU;

use num_complex::Complex64;
use orbispec::mollifier::{
    check_bounds, papa_pipeline, DiskDistance, Frame, Model, Mollifier, MollifierConfig,
    PapaParams, Regularity,
};
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsParams {
    pub kappas: Vec<f64>,
    pub radius: f64,
    pub rings: usize,
    pub per_ring: usize,
    pub defect_tol: f64,
}

impl Default for BoundsParams {
    fn default() -> Self {
        BoundsParams {
            kappas: vec![0.2, 0.1, 0.05],
            radius: 0.8,
            rings: 12,
            per_ring: 24,
            defect_tol: 1e-8,
        }
    }
}

fn rotated_frame() -> Frame {
    Frame::rotated(|z| {
        (
            0.7 + 1.3 * z.re + 0.4 * z.norm_sqr(),
            1.3 + 0.8 * z.re,
            0.8 * z.im,
        )
    })
}

/// Points on rings around `c` whose κ-balls avoid the boundary circle: inside
/// the disk below `R − κ` and outside between `R + κ` and `R + 1.2`.
fn ring_samples(
    model: Model,
    c: Complex64,
    radius: f64,
    kappa: f64,
    rings: usize,
    per_ring: usize,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rings * per_ring);
    for i in 0..rings {
        let s = if i % 4 == 0 {
            (radius - kappa) * (0.2 + 0.7 * (i as f64 / rings as f64))
        } else {
            radius + 1.05 * kappa + 1.2 * (i as f64 / rings as f64)
        };
        for j in 0..per_ring {
            let th = TAU * (j as f64 + 0.5 * i as f64) / per_ring as f64;
            out.push(model.point_at(c, th, s));
        }
    }
    out
}

/// Value and gradient bounds of frame-averaged smoothing of disk distances.
pub struct MollifyBounds;

impl Experiment for MollifyBounds {
    const NAME: &'static str = "mollify-bounds";
    const SUMMARY: &'static str =
        "smoothing of disk-distance functions in the Euclidean and hyperbolic planes";
    const VERIFIES: &'static str =
        "|f_κ − f| ≤ ℓκ and |∇f_κ − ∇f| ≤ (ℓb + β)κ; f_κ independent of the frame and equivariant under isometries";
    type Params = BoundsParams;

    fn run(p: &BoundsParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mut checks = Vec::new();
        let mut rows = Vec::new();
        for (model, c) in [
            (Model::Euclidean, Complex64::new(0.1, -0.2)),
            (Model::Hyperbolic, Complex64::new(0.05, 0.0)),
        ] {
            let f = DiskDistance::new(model, c, p.radius)?;
            let beta = match model {
                Model::Euclidean => 1.0 / p.radius,
                Model::Hyperbolic => 1.0 / p.radius.tanh(),
            };
            let rots: Vec<_> = (1..6)
                .map(|k| model.rotation_about(c, TAU * k as f64 / 6.0))
                .collect();
            let maps: Vec<&dyn Fn(Complex64) -> Complex64> = rots
                .iter()
                .map(|r| r as &dyn Fn(Complex64) -> Complex64)
                .collect();
            for &kappa in &p.kappas {
                let moll = Mollifier::new(
                    model,
                    Frame::coordinate(),
                    MollifierConfig {
                        kappa,
                        ..Default::default()
                    },
                )?;
                let samples = ring_samples(model, c, p.radius, kappa, p.rings, p.per_ring);
                let rep = check_bounds(&moll, &f, Regularity { ell: 1.0, beta }, &samples)?;
                let tag = format!("{model:?}_k{kappa}").to_lowercase();
                checks.push(Check::le(
                    format!("{tag}_value_violations"),
                    rep.value_violations as f64,
                    0.0,
                ));
                checks.push(Check::le(
                    format!("{tag}_gradient_violations"),
                    rep.gradient_violations as f64,
                    0.0,
                ));
                let other = moll.with_frame(rotated_frame());
                let mut frame_defect: f64 = 0.0;
                for &x in samples.iter().step_by(7) {
                    frame_defect =
                        frame_defect.max((moll.smooth(&f, x)? - other.smooth(&f, x)?).abs());
                    let (a, b) = (moll.smooth_gradient(&f, x)?, other.smooth_gradient(&f, x)?);
                    frame_defect = frame_defect
                        .max((a[0] - b[0]).abs())
                        .max((a[1] - b[1]).abs());
                }
                checks.push(Check::le(
                    format!("{tag}_frame_defect"),
                    frame_defect,
                    p.defect_tol,
                ));
                let sub: Vec<Complex64> = samples.iter().step_by(11).copied().collect();
                let equiv = other.equivariance_defect(&f, &maps, &sub)?;
                checks.push(Check::le(
                    format!("{tag}_equivariance_defect"),
                    equiv,
                    p.defect_tol,
                ));
                rows.push(serde_json::json!({ "model": format!("{model:?}"), "bounds": rep, "frame_defect": frame_defect, "equivariance_defect": equiv }));
            }
        }
        Ok(Outcome::new(checks, rows))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PapaExpParams {
    pub radius: f64,
    pub kappa: f64,
    pub radial_order: usize,
    pub angular_order: usize,
    pub samples: usize,
    pub eta: f64,
    pub envelope_slack: f64,
}

impl Default for PapaExpParams {
    fn default() -> Self {
        PapaExpParams {
            radius: 1.0,
            kappa: 0.04,
            radial_order: 8,
            angular_order: 16,
            samples: 128,
            eta: 0.3,
            envelope_slack: 0.1,
        }
    }
}

/// Smooth strictly convex approximation of a hyperbolic disk from a level
/// set of its smoothed distance function.
pub struct MollifyPapa;

impl Experiment for MollifyPapa {
    const NAME: &'static str = "mollify-papa";
    const SUMMARY: &'static str = "level curve of the smoothed distance to a hyperbolic disk";
    const VERIFIES: &'static str =
        "the level curve is strictly convex, squeezed between the body and its η-neighbourhood, with curvature inside the comparison envelope";
    type Params = PapaExpParams;

    fn run(p: &PapaExpParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let f = DiskDistance::new(Model::Hyperbolic, Complex64::default(), p.radius)?;
        let cfg = MollifierConfig {
            kappa: p.kappa,
            radial_order: p.radial_order,
            angular_order: p.angular_order,
            ..Default::default()
        };
        let moll = Mollifier::new(Model::Hyperbolic, Frame::coordinate(), cfg)?;
        let params = PapaParams {
            samples: p.samples,
            ..PapaParams::for_disk(f.boundary_curvature(), p.eta)
        };
        let (rep, curve) = papa_pipeline(&moll, &f, Complex64::default(), &params)?;
        let checks = vec![
            Check::holds("strictly_convex", rep.strictly_convex),
            Check::ge(
                "curvature_min_minus_one",
                rep.curvature_min - 1.0,
                f64::MIN_POSITIVE,
            ),
            Check::holds("within_envelope", rep.within_envelope(p.envelope_slack)),
            Check::ge("inner_margin", rep.inner_margin, 0.0),
            Check::ge("outer_margin", rep.outer_margin, 0.0),
        ];
        Ok(Outcome::new(checks, &rep).with_artifact("csv", curve.to_csv()))
    }
}
