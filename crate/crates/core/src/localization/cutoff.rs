use serde::{Deserialize, Serialize};

use super::LocalizationError;
use crate::geom::{exp_map, geodesic_frame, project_convex, ConvexBody, Point, Tangent};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffSample {
    pub r: f64,
    /// Largest sampled `|∇(ψ∘π)|` on the level set at distance `r`.
    pub sup_gradient: f64,
    /// `C₀ / cosh r`.
    pub bound: f64,
}

/// Points at distance `r` from a disk or geodesic, on both sides of a
/// geodesic with feet at arclength `[-span, span]` along it.
pub fn level_set_points(
    body: &ConvexBody,
    r: f64,
    span: f64,
    samples: usize,
) -> Result<Vec<Point>, LocalizationError> {
    let n = samples.max(2);
    match body {
        ConvexBody::Geodesic { ends } => {
            let frame = geodesic_frame(*ends)?;
            let mut out = Vec::with_capacity(2 * n);
            for k in 0..n {
                let s = -span + 2.0 * span * k as f64 / (n - 1) as f64;
                for side in [-1.0, 1.0] {
                    // distance r from the axis: x/y = sinh r at height e^s.
                    let z = Point {
                        x: side * s.exp() * r.tanh(),
                        y: s.exp() / r.cosh(),
                    };
                    out.push(frame.apply(&z));
                }
            }
            Ok(out)
        }
        ConvexBody::Disk { center, radius } => Ok((0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / n as f64;
                let rho = radius + r;
                exp_map(
                    center,
                    Tangent {
                        dx: rho * center.y * th.cos(),
                        dy: rho * center.y * th.sin(),
                    },
                )
            })
            .collect()),
        _ => Err(LocalizationError::Unsupported(
            "cutoff profiles need a disk or a geodesic".into(),
        )),
    }
}

/// Riemannian gradient norm `y |∇_E f|` by central differences.
pub(crate) fn gradient_norm(f: &dyn Fn(&Point) -> f64, p: &Point, rel_step: f64) -> f64 {
    let d = rel_step * p.y;
    let at = |dx: f64, dy: f64| {
        f(&Point {
            x: p.x + dx,
            y: p.y + dy,
        })
    };
    let gx = (at(d, 0.0) - at(-d, 0.0)) / (2.0 * d);
    let gy = (at(0.0, d) - at(0.0, -d)) / (2.0 * d);
    p.y * gx.hypot(gy)
}

/// Sup of `|∇(ψ∘π_H)|` over sampled level sets `{d(·, H) = r}`.
///
/// `psi` is evaluated at foot points and has gradient bounded by `c0`.
pub fn cutoff_decay_profile(
    body: &ConvexBody,
    psi: &dyn Fn(&Point) -> f64,
    c0: f64,
    radii: &[f64],
    span: f64,
    samples: usize,
) -> Result<Vec<CutoffSample>, LocalizationError> {
    if radii.windows(2).any(|w| !(w[1] > w[0])) || radii.first().is_some_and(|r| !(*r > 0.0)) {
        return Err(LocalizationError::NotIncreasing);
    }
    let phi = |p: &Point| psi(&project_convex(body, p).map(|pr| pr.foot).unwrap_or(*p));
    radii
        .iter()
        .map(|&r| {
            let sup = level_set_points(body, r, span, samples)?
                .iter()
                .map(|p| gradient_norm(&phi, p, 1e-6))
                .fold(0.0, f64::max);
            Ok(CutoffSample {
                r,
                sup_gradient: sup,
                bound: c0 / r.cosh(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{distance, Ideal};

    fn axis() -> ConvexBody {
        ConvexBody::Geodesic {
            ends: [Ideal::Real(0.0), Ideal::Infinity],
        }
    }

    /// `s e^{−s²/2}` in the arclength `s = ln y` of the foot; gradient bound 1.
    fn bump(p: &Point) -> f64 {
        let s = p.y.ln();
        s * (-s * s / 2.0).exp()
    }

    #[test]
    fn level_sets_are_at_distance_r() {
        for body in [
            axis(),
            ConvexBody::Disk {
                center: Point::I,
                radius: 0.7,
            },
        ] {
            for p in level_set_points(&body, 2.0, 3.0, 20).unwrap() {
                assert!((project_convex(&body, &p).unwrap().dist - 2.0).abs() < 1e-10);
            }
        }
        let p = level_set_points(&axis(), 1.0, 0.0, 2).unwrap()[0];
        assert!((distance(&p, &Point::new(0.0, 1.0).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_cutoff_has_zero_gradient() {
        let prof = cutoff_decay_profile(&axis(), &|_| 1.0, 0.0, &[1.0, 2.0], 2.0, 50).unwrap();
        assert!(prof.iter().all(|s| s.sup_gradient == 0.0));
    }

    #[test]
    fn axis_decay_matches_cosh() {
        let prof = cutoff_decay_profile(&axis(), &bump, 1.0, &[2.0, 3.0, 4.0], 4.0, 801).unwrap();
        let r3 = prof[1];
        assert!((r3.bound - 1.0 / 3f64.cosh()).abs() < 1e-15);
        assert!(r3.sup_gradient <= 0.10);
        assert!(r3.sup_gradient <= r3.bound + 1e-6);
        let ratio = prof[0].sup_gradient / prof[1].sup_gradient;
        assert!((ratio - 3f64.cosh() / 2f64.cosh()).abs() < 1e-3, "{ratio}");
        assert!(cutoff_decay_profile(&axis(), &bump, 1.0, &[2.0, 1.0], 1.0, 10).is_err());
    }
}
