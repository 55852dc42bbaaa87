use nalgebra::DMatrix;
use orbispec::fit::fit_line;
use orbispec::geom::{ConvexBody, Ideal, Point};
use orbispec::localization::{
    best_piece, cos4_bump, cutoff_decay_profile, discrete_form_minimum, first_order_defect,
    ims_refinement, make_partition, operator_lower_bound, second_order_defect, Cover,
    FirstOrderOperator, Grid1D, LocalizedOperator, Quadrature, Section1D,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImsParams {
    pub triples: usize,
    pub length: f64,
    pub intervals: Vec<usize>,
    pub min_rate: f64,
    pub max_relative_defect: f64,
}

impl Default for ImsParams {
    fn default() -> Self {
        ImsParams {
            triples: 20,
            length: 12.0,
            intervals: vec![1500, 3000, 6000, 12000],
            min_rate: 1.9,
            max_relative_defect: 1e-5,
        }
    }
}

/// Discretization defect of the localization identity under refinement.
pub struct Ims;

impl Experiment for Ims {
    const NAME: &'static str = "ims";
    const SUMMARY: &'static str =
        "localization identity for random sections, two-piece partitions and potentials";
    const VERIFIES: &'static str =
        "Σ_V q(ψ_V u) = q(u) + Σ_V ‖|∇ψ_V| u‖², with the finite-difference defect vanishing at second order";
    type Params = ImsParams;

    fn run(p: &ImsParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let l = p.length;
        let mut min_rate = f64::INFINITY;
        let mut max_rel: f64 = 0.0;
        let mut finest_h = 0.0;
        let mut trials = Vec::new();
        for _ in 0..p.triples {
            let width = ctx.rng.random_range(0.55..0.75) * l;
            let center = l / 2.0 + ctx.rng.random_range(-0.5..0.5) * (l - width - 1.0);
            let cut = ctx.rng.random_range(0.4..0.6) * l;
            let ramp = ctx.rng.random_range(0.15..0.21) * l;
            let (amp, freq) = (
                ctx.rng.random_range(0.0..1.0),
                ctx.rng.random_range(0.1..0.5),
            );
            let cover = Cover::new(vec![(0.0, cut + ramp), (cut - ramp, l)], ramp);
            let op = LocalizedOperator::schrodinger(move |x| amp * (1.0 + (freq * x).sin()), 0.0);
            let reps = ims_refinement(
                (0.0, l),
                &p.intervals,
                &cos4_bump(center, width),
                &cover,
                &op,
            )?;
            let logs_h: Vec<f64> = reps.iter().map(|r| r.grid_h.ln()).collect();
            let logs_d: Vec<f64> = reps.iter().map(|r| r.defect.abs().ln()).collect();
            let rate = fit_line(&logs_h, &logs_d)?.slope;
            let last = reps.last().expect("at least one grid");
            let rel = (last.defect / last.lhs).abs();
            finest_h = last.grid_h;
            min_rate = min_rate.min(rate);
            max_rel = max_rel.max(rel);
            trials.push(serde_json::json!({ "center": center, "width": width, "cut": cut, "ramp": ramp, "rate": rate, "relative_defect": rel }));
        }
        let checks = vec![
            Check::ge("min_rate", min_rate, p.min_rate),
            Check::le("finest_relative_defect", max_rel, p.max_relative_defect),
            Check::le("finest_h", finest_h, 1e-3 + 1e-12),
        ];
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "trials": trials }),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsParams {
    pub trials: usize,
    pub nodes: usize,
    pub slack: f64,
}

impl Default for BoundsParams {
    fn default() -> Self {
        BoundsParams {
            trials: 500,
            nodes: 1200,
            slack: 1e-6,
        }
    }
}

/// Randomized checks of the localization inequalities.
pub struct LocalizationBounds;

impl Experiment for LocalizationBounds {
    const NAME: &'static str = "localization-bounds";
    const SUMMARY: &'static str =
        "best-piece Rayleigh bound, first- and second-order partition bounds, form lower bound";
    const VERIFIES: &'static str =
        "some ψ_V u has Rayleigh quotient ≤ Ray(u) + Σ sup|∇ψ_V|²; the partition bounds on |(A−λ)ψ_V u|²; ⟨(Δ+B)u,u⟩ ≥ −(c0 + ‖σ‖²)‖u‖²";
    type Params = BoundsParams;

    fn run(p: &BoundsParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let l = 12.0;
        let grid = Grid1D::new(0.0, l, p.nodes, Quadrature::Trapezoid)?;
        let (mut piece_slack, mut first_excess, mut second_excess) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for _ in 0..p.trials {
            let pieces = ctx.rng.random_range(2..=4);
            let ramp = ctx.rng.random_range(0.3..1.0);
            let step = l / pieces as f64;
            let intervals: Vec<(f64, f64)> = (0..pieces)
                .map(|i| {
                    (
                        (i as f64 * step - ramp).max(0.0),
                        ((i + 1) as f64 * step + ramp).min(l),
                    )
                })
                .collect();
            let part = make_partition(&grid, &Cover::new(intervals, ramp))?;
            let width = ctx.rng.random_range(1.0..8.0);
            let center = ctx
                .rng
                .random_range(width / 2.0 + 0.05..l - width / 2.0 - 0.05);
            let u = Section1D::sample(&grid, &cos4_bump(center, width));
            let (a, f): (f64, f64) = (
                ctx.rng.random_range(-2.0..2.0),
                ctx.rng.random_range(0.1..2.0),
            );
            let op = LocalizedOperator::schrodinger(move |x| a * (f * x).cos(), a.abs());
            let lambda = ctx.rng.random_range(-1.0..3.0);
            piece_slack = piece_slack.min(best_piece(&grid, &u, &part, &op)?.slack);
            let s = ctx.rng.random_range(-2.0..2.0);
            let first = FirstOrderOperator::new(DMatrix::from_element(1, 1, s), move |x| {
                DMatrix::from_element(1, 1, a * (f * x).sin())
            });
            first_excess = first_excess
                .max(first_order_defect(&grid, &u, lambda, &part, &first)?.worst_excess);
            second_excess =
                second_excess.max(second_order_defect(&grid, &u, lambda, &part, &op)?.worst_excess);
        }
        let bound = operator_lower_bound(1.0, 2.0);
        let mut form_min = f64::INFINITY;
        for n in [200, 400, 800] {
            let g = Grid1D::new(0.0, 40.0, n, Quadrature::Trapezoid)?;
            form_min = form_min.min(discrete_form_minimum(
                &g,
                &LocalizedOperator::rotating(2.0, 1.0),
            ));
        }
        let checks = vec![
            Check::ge("best_piece_slack", piece_slack, -p.slack),
            Check::le("first_order_excess", first_excess, p.slack),
            Check::le("second_order_excess", second_excess, p.slack),
            Check::holds("lower_bound_value", bound == -5.0),
            Check::ge("form_minimum_minus_bound", form_min - bound, -p.slack),
        ];
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "best_piece_slack": piece_slack, "first_order_excess": first_excess,
                                "second_order_excess": second_excess, "form_minimum": form_min }),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffParams {
    pub radii: Vec<f64>,
    pub span: f64,
    pub samples: usize,
    pub slack: f64,
}

impl Default for CutoffParams {
    fn default() -> Self {
        CutoffParams {
            radii: vec![3.0, 4.0, 5.0],
            span: 4.0,
            samples: 801,
            slack: 1e-3,
        }
    }
}

/// `s e^{−s²/2}` in the arclength of the foot on the imaginary axis; gradient bound 1.
fn axis_cutoff(p: &Point) -> f64 {
    let s = p.y.ln();
    s * (-s * s / 2.0).exp()
}

/// Gradient of a cutoff pulled back along the nearest-point projection.
pub struct CutoffDecay;

impl Experiment for CutoffDecay {
    const NAME: &'static str = "cutoff-decay";
    const SUMMARY: &'static str = "sup |∇(ψ∘π)| on level sets at distance r from a geodesic";
    const VERIFIES: &'static str = "|∇(ψ∘π)| ≤ C₀ / cosh r for ψ with |∇ψ| ≤ C₀ on the geodesic";
    type Params = CutoffParams;

    fn run(p: &CutoffParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let axis = ConvexBody::Geodesic {
            ends: [Ideal::Real(0.0), Ideal::Infinity],
        };
        let prof = cutoff_decay_profile(&axis, &axis_cutoff, 1.0, &p.radii, p.span, p.samples)?;
        let checks = prof
            .iter()
            .map(|s| Check::le(format!("r={}", s.r), s.sup_gradient, s.bound + p.slack))
            .collect();
        Ok(Outcome::new(checks, &prof))
    }
}
