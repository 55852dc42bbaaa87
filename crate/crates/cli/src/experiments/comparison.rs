use nalgebra::{DMatrix, DVector};
use orbispec::comparison::{
    comparison_margins, frame_jacobi_solve, gronwall_bound, isotropic_curvature, jacobi_solve,
    perturbed_jacobi_solve, riccati_solve, transverse_decay_experiment, CurvatureProfile,
    DecayOptions, RiccatiInit,
};
use orbispec::geom::{ConvexBody, Point};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SandwichParams {
    pub profiles: usize,
    pub t_end: f64,
    pub h: f64,
    pub slack: f64,
}

impl Default for SandwichParams {
    fn default() -> Self {
        SandwichParams {
            profiles: 200,
            t_end: 3.0,
            h: 0.01,
            slack: 1e-6,
        }
    }
}

/// Random rotating, pinched curvature: both eigenvalues of `K` stay in `[1, 2.25]`.
fn random_profile(rng: &mut impl Rng, dim: usize) -> Result<CurvatureProfile, ExperimentError> {
    let amp: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..0.625)).collect();
    let freq: Vec<f64> = (0..dim).map(|_| rng.random_range(0.2..3.0)).collect();
    let phase: Vec<f64> = (0..dim)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();
    let spin = rng.random_range(-1.0..1.0);
    let prof = CurvatureProfile::new(dim, 1.0, 1.5, move |t| {
        let diag = DVector::from_fn(dim, |i, _| 1.625 + amp[i] * (freq[i] * t + phase[i]).sin());
        let (s, c) = (spin * t).sin_cos();
        let mut rot = DMatrix::identity(dim, dim);
        if dim >= 2 {
            rot[(0, 0)] = c;
            rot[(0, 1)] = -s;
            rot[(1, 0)] = s;
            rot[(1, 1)] = c;
        }
        &rot * DMatrix::from_diagonal(&diag) * rot.transpose()
    })?;
    Ok(prof)
}

/// Shape operators of random pinched profiles against the model envelopes.
pub struct RiccatiSandwich;

impl Experiment for RiccatiSandwich {
    const NAME: &'static str = "riccati-sandwich";
    const SUMMARY: &'static str =
        "Riccati solutions for random curvature with spectrum in [1, 2.25] and random Q0 ≥ 0";
    const VERIFIES: &'static str =
        "S_a ≤ S ≤ S_b for the shape operator under pinching −b² ≤ K ≤ −a²";
    type Params = SandwichParams;

    fn run(p: &SandwichParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let (mut lower, mut upper) = (f64::INFINITY, f64::INFINITY);
        let mut worst_sym: f64 = 0.0;
        for _ in 0..p.profiles {
            let dim = ctx.rng.random_range(1..=3);
            let prof = random_profile(&mut ctx.rng, dim)?;
            prof.check_pinching(p.t_end, 100)?;
            let b = DMatrix::from_fn(dim, dim, |_, _| ctx.rng.random_range(-1.0..1.0));
            let init = RiccatiInit::regular(&b * b.transpose())?;
            let path = riccati_solve(&prof, &init, p.t_end, p.h)?;
            let m = comparison_margins(&path, &init, 1.0, 1.5)?;
            lower = lower.min(m.lower);
            upper = upper.min(m.upper);
            worst_sym = worst_sym.max(path.symmetry_defect());
        }
        let checks = vec![
            Check::ge("lower_margin", lower, -p.slack),
            Check::ge("upper_margin", upper, -p.slack),
            Check::le("symmetry_defect", worst_sym, 1e-10),
        ];
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "profiles": p.profiles, "lower": lower, "upper": upper }),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RauchParams {
    pub rates: Vec<f64>,
    pub t_end: f64,
    pub h: f64,
    pub pinched_trials: usize,
}

impl Default for RauchParams {
    fn default() -> Self {
        RauchParams {
            rates: vec![0.5, 1.0, 1.5, 2.0],
            t_end: 3.0,
            h: 1e-3,
            pinched_trials: 20,
        }
    }
}

/// Jacobi fields with `J′(0) = 0`: the cosh bound is attained in constant
/// curvature and respected under pinching.
pub struct Rauch;

impl Experiment for Rauch {
    const NAME: &'static str = "rauch";
    const SUMMARY: &'static str =
        "Jacobi fields with vanishing initial derivative against cosh(bt)|J(0)|";
    const VERIFIES: &'static str =
        "|J(t)| ≤ cosh(bt)|J(0)| for curvature ≥ −b², with equality in constant curvature";
    type Params = RauchParams;

    fn run(p: &RauchParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mut tight: f64 = 0.0;
        for &b in &p.rates {
            let prof = CurvatureProfile::constant(2, b)?;
            let j0 = DVector::from_vec(vec![0.6, -0.8]);
            let path = jacobi_solve(&prof, &j0, &DVector::zeros(2), p.t_end, p.h)?;
            for (t, j) in path.t.iter().zip(&path.j) {
                let exact = (b * t).cosh();
                tight = tight.max((j.norm() - exact).abs() / exact);
            }
        }
        let mut excess = f64::NEG_INFINITY;
        for _ in 0..p.pinched_trials {
            let prof = random_profile(&mut ctx.rng, 2)?;
            let j0 = DVector::from_fn(2, |_, _| ctx.rng.random_range(-1.0..1.0));
            let path = jacobi_solve(&prof, &j0, &DVector::zeros(2), p.t_end, p.h)?;
            for (t, j) in path.t.iter().zip(&path.j) {
                excess = excess.max(j.norm() / ((1.5 * t).cosh() * j0.norm()) - 1.0);
            }
        }
        let checks = vec![
            Check::le("constant_curvature_deviation", tight, 1e-8),
            Check::le("pinched_excess", excess, 1e-9),
        ];
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "deviation": tight, "pinched_excess": excess }),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GronwallParams {
    pub trials: usize,
    pub h: f64,
}

impl Default for GronwallParams {
    fn default() -> Self {
        GronwallParams {
            trials: 100,
            h: 0.01,
        }
    }
}

/// Second variations of geodesics in constant curvature against the
/// Gronwall envelope.
pub struct Gronwall;

impl Experiment for Gronwall {
    const NAME: &'static str = "gronwall";
    const SUMMARY: &'static str =
        "perturbed Jacobi fields for random (v, w) with b|v| ≤ 1 in constant curvature −b²";
    const VERIFIES: &'static str =
        "‖(K, K′)(1)‖ stays below the Gronwall bound built from b, b′, |v| and |w|";
    type Params = GronwallParams;

    fn run(p: &GronwallParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let mut worst: f64 = 0.0;
        for _ in 0..p.trials {
            let b = ctx.rng.random_range(0.5..2.0);
            let speed = ctx.rng.random_range(0.05..=1.0) / b;
            let w = DVector::from_fn(2, |_, _| ctx.rng.random_range(-1.0..1.0));
            let prof = CurvatureProfile::constant(1, b)?;
            let jpath = frame_jacobi_solve(&prof, speed, &w, &DVector::zeros(2), 1.0, p.h)?;
            let v = DVector::from_vec(vec![speed, 0.0]);
            let k0p = isotropic_curvature(-b * b, &v, &w, &w);
            let k = perturbed_jacobi_solve(&prof, speed, &jpath, &DVector::zeros(2), &k0p, None)?;
            let (kk, kp) = k.end();
            let norm = (kk.norm_squared() + kp.norm_squared()).sqrt();
            worst = worst.max(norm / gronwall_bound(b, 0.0, speed, w.norm()));
        }
        Ok(Outcome::new(
            vec![Check::le("worst_ratio", worst, 1.0)],
            serde_json::json!({ "worst_ratio": worst }),
        ))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayParams {
    pub disk_radius: f64,
    pub radii: Vec<f64>,
    pub h: f64,
    pub max_slope: f64,
}

impl Default for DecayParams {
    fn default() -> Self {
        DecayParams {
            disk_radius: 1.0,
            radii: (2..=8).map(f64::from).collect(),
            h: 0.01,
            max_slope: -0.9,
        }
    }
}

/// Transverse component of the Hessian of a distance function far away
/// from a disk.
pub struct Decay;

impl Experiment for Decay {
    const NAME: &'static str = "decay";
    const SUMMARY: &'static str =
        "envelope for the transverse Hessian term at distance r from a disk, r ∈ [2, 8]";
    const VERIFIES: &'static str = "the transverse term decays at least like e^{−ar} with a = 1";
    type Params = DecayParams;

    fn run(p: &DecayParams, _: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let disk = ConvexBody::Disk {
            center: Point::I,
            radius: p.disk_radius,
        };
        let rep = transverse_decay_experiment(
            &disk,
            &p.radii,
            DecayOptions {
                h: p.h,
                ..Default::default()
            },
        )?;
        let checks = vec![Check::le("envelope_slope", rep.envelope_slope, p.max_slope)];
        Ok(Outcome::new(checks, &rep))
    }
}
