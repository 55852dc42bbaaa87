use orbispec::spectral::{
    ess_bottom, surface_experiment, weyl_sequence, EndKind, EssParams, SurfaceDescriptor, Verdict,
    WarpedEnd, DEFAULT_WIDTHS,
};
use orbispec::tables::{delta0, mckean_bound};
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EssExpParams {
    pub end: EndKind,
    pub n: i64,
    pub h: f64,
    pub t_sequence: Vec<f64>,
    pub tolerance: f64,
}

impl Default for EssExpParams {
    fn default() -> Self {
        let d = EssParams::default();
        EssExpParams {
            end: EndKind::Funnel,
            n: 0,
            h: d.h,
            t_sequence: d.t_sequence,
            tolerance: d.tolerance,
        }
    }
}

/// Bottom of the essential spectrum of one Fourier channel of a model end.
pub struct EssBottom;

impl Experiment for EssBottom {
    const NAME: &'static str = "ess-bottom";
    const SUMMARY: &'static str =
        "Dirichlet ground states on truncated funnel, cusp or cylinder ends, extrapolated in T";
    const VERIFIES: &'static str =
        "the essential spectrum of Δ₀ on a hyperbolic surface end starts at 1/4 = δ₀(H²)";
    type Params = EssExpParams;

    fn run(p: &EssExpParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let params = EssParams {
            t_sequence: p.t_sequence.clone(),
            h: p.h,
            tolerance: p.tolerance,
            ..Default::default()
        };
        let rep = ess_bottom(&WarpedEnd::new(p.end, p.n), &params)?;
        let target = delta0(2, 1)?;
        let mckean = mckean_bound(2, 1.0)?;
        let mut checks = vec![
            Check::holds("converged", rep.verdict != Verdict::Inconclusive),
            Check::holds("monotone_in_T", rep.monotone),
        ];
        if p.n == 0 {
            checks.push(Check::le(
                "distance_to_delta0",
                (rep.extrapolated - target).abs(),
                p.tolerance,
            ));
            checks.push(Check::le(
                "distance_to_mckean",
                (rep.extrapolated - mckean).abs(),
                p.tolerance,
            ));
            checks.push(Check::holds("estimators_agree", !rep.disagreement));
        } else {
            checks.push(Check::ge(
                "bottom_minus_delta0",
                rep.extrapolated - target,
                -p.tolerance,
            ));
        }
        let csv = rep.to_csv();
        Ok(Outcome::new(checks, &rep).with_artifact("csv", csv))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurfaceParams {
    pub ends: Vec<EndKind>,
    pub modes: Vec<i64>,
    pub h: f64,
    pub t_sequence: Vec<f64>,
    pub tolerance: f64,
}

impl Default for SurfaceParams {
    fn default() -> Self {
        let d = EssParams::default();
        SurfaceParams {
            ends: vec![EndKind::Cusp, EndKind::Funnel],
            modes: vec![0],
            h: 5e-3,
            t_sequence: d.t_sequence,
            tolerance: d.tolerance,
        }
    }
}

/// Essential bottom of a model surface as the minimum over its ends.
pub struct Surface;

impl Experiment for Surface {
    const NAME: &'static str = "surface";
    const SUMMARY: &'static str =
        "minimum over ends of the extrapolated bottoms of a model surface";
    const VERIFIES: &'static str =
        "λ_ess ≥ 1/4 for every geometrically finite surface, with equality when the area is infinite";
    type Params = SurfaceParams;

    fn run(p: &SurfaceParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let params = EssParams {
            t_sequence: p.t_sequence.clone(),
            h: p.h,
            tolerance: p.tolerance,
            ..Default::default()
        };
        let rep = surface_experiment(
            &SurfaceDescriptor {
                ends: p.ends.clone(),
                modes: p.modes.clone(),
            },
            &params,
        )?;
        let target = delta0(2, 1)?;
        let mut checks = vec![Check::holds(
            "converged",
            rep.verdict != Verdict::Inconclusive,
        )];
        if rep.infinite_volume {
            checks.push(Check::le(
                "distance_to_delta0",
                (rep.estimate - target).abs(),
                p.tolerance,
            ));
        } else {
            checks.push(Check::ge(
                "estimate_minus_delta0",
                rep.estimate - target,
                -p.tolerance,
            ));
        }
        Ok(Outcome::new(checks, &rep))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeylParams {
    pub ends: Vec<EndKind>,
    pub lambdas: Vec<f64>,
    pub widths: Vec<f64>,
    pub tolerance: f64,
}

impl Default for WeylParams {
    fn default() -> Self {
        WeylParams {
            ends: vec![EndKind::Cusp, EndKind::Funnel],
            lambdas: vec![0.25, 0.5, 1.0],
            widths: DEFAULT_WIDTHS.to_vec(),
            tolerance: 1e-2,
        }
    }
}

/// Traveling quasi-modes certifying points of the essential spectrum.
pub struct Weyl;

impl Experiment for Weyl {
    const NAME: &'static str = "weyl";
    const SUMMARY: &'static str =
        "residuals of escaping quasi-modes χ_j cos(√(λ−1/4) t) on model ends";
    const VERIFIES: &'static str =
        "sampled λ ≥ 1/4 lie in the essential spectrum: ‖(A−λ)u_j‖/‖u_j‖ → 0";
    type Params = WeylParams;

    fn run(p: &WeylParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mut checks = Vec::new();
        let mut reports = Vec::new();
        for &kind in &p.ends {
            for &lambda in &p.lambdas {
                let rep = weyl_sequence(&WarpedEnd::new(kind, 0), lambda, &p.widths, p.tolerance)?;
                let last = rep.residuals.last().copied().unwrap_or(f64::INFINITY);
                checks.push(Check::le(
                    format!("{kind}_lambda{lambda}_residual"),
                    last,
                    p.tolerance,
                ));
                checks.push(Check::holds(
                    format!("{kind}_lambda{lambda}_decreasing"),
                    rep.certified,
                ));
                reports.push(rep);
            }
        }
        Ok(Outcome::new(checks, reports))
    }
}
