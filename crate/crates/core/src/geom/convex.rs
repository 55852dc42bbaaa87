use serde::{Deserialize, Serialize};

use super::isometry::Isometry;
use super::point::{distance, exp_map, log_map, unit_away_from, Ideal, Point, Tangent};
use super::GeomError;

/// Closed geodesically convex subsets handled by [`project_convex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    /// Complete geodesic between two distinct ideal points.
    Geodesic {
        ends: [Ideal; 2],
    },
    Segment {
        from: Point,
        to: Point,
    },
    Disk {
        center: Point,
        radius: f64,
    },
    /// Region bounded by geodesics joining circularly consecutive vertices.
    IdealPolygon {
        vertices: Vec<Ideal>,
    },
}

/// Result of a nearest-point projection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub foot: Point,
    pub dist: f64,
    /// Unit velocity at `p` of the geodesic from the foot through `p`;
    /// `None` when `p` lies in the body.
    pub grad: Option<Tangent>,
}

/// A complete geodesic carried together with an isometry mapping it onto
/// the imaginary axis.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Line {
    to_axis: Isometry,
}

impl Line {
    pub(crate) fn through_ideals(p: Ideal, q: Ideal) -> Result<Self, GeomError> {
        // h(z) = (z − p)/(q − z) sends p ↦ 0 and q ↦ ∞.
        let (a, b, c, d) = match (p, q) {
            (Ideal::Real(p), Ideal::Real(q)) => (1.0, -p, -1.0, q),
            (Ideal::Real(p), Ideal::Infinity) => (1.0, -p, 0.0, 1.0),
            (Ideal::Infinity, Ideal::Real(q)) => (0.0, -1.0, 1.0, -q),
            (Ideal::Infinity, Ideal::Infinity) => {
                return Err(GeomError::Domain("geodesic endpoints coincide".into()))
            }
        };
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return Err(GeomError::Domain("geodesic endpoints coincide".into()));
        }
        // Orientation-reversing when det < 0; compose with z ↦ −z̄ instead,
        // which keeps the imaginary axis.
        let to_axis = if det > 0.0 {
            Isometry::normalized(a, b, c, d)?
        } else {
            Isometry::normalized(-a, -b, c, d)?
        };
        Ok(Line { to_axis })
    }

    /// Signed distance, positive on one fixed side of the line.
    pub(crate) fn signed_distance(&self, p: &Point) -> f64 {
        let w = self.to_axis.apply(p);
        (w.x / w.y).asinh()
    }

    /// Side of a boundary point relative to the line (0 for an endpoint).
    pub(crate) fn ideal_side(&self, xi: &Ideal) -> f64 {
        match self.to_axis.apply_ideal(xi) {
            Ideal::Real(x) if x.abs() > 1e-12 => x.signum(),
            _ => 0.0,
        }
    }

    pub(crate) fn foot(&self, p: &Point) -> Point {
        let w = self.to_axis.apply(p);
        let r = w.x.hypot(w.y);
        self.to_axis.inverse().apply(&Point { x: 0.0, y: r })
    }
}

#[derive(Clone, Debug)]
struct PolygonEdges {
    lines: Vec<Line>,
    signs: Vec<f64>,
}

fn polygon_edges(vertices: &[Ideal]) -> Result<PolygonEdges, GeomError> {
    let n = vertices.len();
    let mut lines = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for k in 0..n {
        let line = Line::through_ideals(vertices[k], vertices[(k + 1) % n])?;
        let other = vertices[(k + 2) % n];
        let s = line.ideal_side(&other);
        if s == 0.0 {
            return Err(GeomError::Domain("degenerate ideal polygon".into()));
        }
        lines.push(line);
        signs.push(s);
    }
    Ok(PolygonEdges { lines, signs })
}

impl PolygonEdges {
    fn inside(&self, p: &Point, tol: f64) -> bool {
        self.lines
            .iter()
            .zip(&self.signs)
            .all(|(l, s)| s * l.signed_distance(p) >= -tol)
    }
}

impl ConvexBody {
    /// Validates and normalizes (polygon vertices sorted circularly, deduplicated).
    pub fn checked(self) -> Result<Self, GeomError> {
        match self {
            ConvexBody::Geodesic { ends } => {
                Line::through_ideals(ends[0], ends[1])?;
                Ok(ConvexBody::Geodesic { ends })
            }
            ConvexBody::Segment { .. } => Ok(self),
            ConvexBody::Disk { center, radius } => {
                if !(radius >= 0.0) || !radius.is_finite() {
                    return Err(GeomError::Domain(format!(
                        "disk radius {radius} must be finite and ≥ 0"
                    )));
                }
                Ok(ConvexBody::Disk { center, radius })
            }
            ConvexBody::IdealPolygon { vertices } => {
                let vertices = sort_circular(&vertices);
                if vertices.len() < 3 {
                    return Err(GeomError::TooFewPoints(vertices.len()));
                }
                polygon_edges(&vertices)?;
                Ok(ConvexBody::IdealPolygon { vertices })
            }
        }
    }

    /// Image under an isometry.
    pub fn transform(&self, g: &Isometry) -> ConvexBody {
        match self {
            ConvexBody::Geodesic { ends } => ConvexBody::Geodesic {
                ends: [g.apply_ideal(&ends[0]), g.apply_ideal(&ends[1])],
            },
            ConvexBody::Segment { from, to } => ConvexBody::Segment {
                from: g.apply(from),
                to: g.apply(to),
            },
            ConvexBody::Disk { center, radius } => ConvexBody::Disk {
                center: g.apply(center),
                radius: *radius,
            },
            ConvexBody::IdealPolygon { vertices } => ConvexBody::IdealPolygon {
                vertices: sort_circular(
                    &vertices
                        .iter()
                        .map(|v| g.apply_ideal(v))
                        .collect::<Vec<_>>(),
                ),
            },
        }
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        project_convex(self, p)
            .map(|pr| pr.dist <= tol)
            .unwrap_or(false)
    }
}

/// Sorts boundary points in circular order and removes near-duplicates.
pub(crate) fn sort_circular(points: &[Ideal]) -> Vec<Ideal> {
    let mut v: Vec<Ideal> = points.to_vec();
    v.sort_by(|a, b| a.order_key().total_cmp(&b.order_key()));
    v.dedup_by(|a, b| a.approx_eq(b, 1e-12));
    v
}

/// Nearest-point projection onto a convex body.
pub fn project_convex(body: &ConvexBody, p: &Point) -> Result<Projection, GeomError> {
    let (foot, dist) = match body {
        ConvexBody::Geodesic { ends } => {
            let line = Line::through_ideals(ends[0], ends[1])?;
            (line.foot(p), line.signed_distance(p).abs())
        }
        ConvexBody::Segment { from, to } => {
            let len = distance(from, to);
            if len == 0.0 {
                (*from, distance(from, p))
            } else {
                let v = log_map(from, to);
                let angle = v.dy.atan2(v.dx);
                // Frame with the segment on [i, i e^len].
                let frame = Isometry::frame_at(from, angle);
                let w = frame.inverse().apply(p);
                let s = w.x.hypot(w.y).ln().clamp(0.0, len);
                let foot = frame.apply(&Point { x: 0.0, y: s.exp() });
                (foot, distance(&foot, p))
            }
        }
        ConvexBody::Disk { center, radius } => {
            let dc = distance(center, p);
            if dc <= *radius {
                (*p, 0.0)
            } else {
                let v = log_map(center, p);
                let scale = radius / v.norm_at(center);
                let foot = exp_map(
                    center,
                    Tangent {
                        dx: v.dx * scale,
                        dy: v.dy * scale,
                    },
                );
                (foot, dc - radius)
            }
        }
        ConvexBody::IdealPolygon { vertices } => {
            let edges = polygon_edges(vertices)?;
            if edges.inside(p, 0.0) {
                (*p, 0.0)
            } else {
                let mut best: Option<(Point, f64)> = None;
                let mut fallback: Option<(Point, f64)> = None;
                for line in &edges.lines {
                    let foot = line.foot(p);
                    let d = distance(&foot, p);
                    if fallback.is_none_or(|(_, bd)| d < bd) {
                        fallback = Some((foot, d));
                    }
                    if edges.inside(&foot, 1e-9) && best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((foot, d));
                    }
                }
                best.or(fallback).expect("polygon has edges")
            }
        }
    };
    let grad = if dist > 0.0 {
        unit_away_from(p, &foot)
    } else {
        None
    };
    Ok(Projection { foot, dist, grad })
}

/// Isometry taking the imaginary axis onto the geodesic, `0 ↦ ends[0]`, `∞ ↦ ends[1]`.
pub fn geodesic_frame(ends: [Ideal; 2]) -> Result<Isometry, GeomError> {
    Ok(Line::through_ideals(ends[0], ends[1])?.to_axis.inverse())
}

/// Convex hull of finitely many boundary points.
pub fn convex_hull_ideal(points: &[Ideal]) -> Result<ConvexBody, GeomError> {
    let v = sort_circular(points);
    match v.len() {
        0 | 1 => Err(GeomError::TooFewPoints(v.len())),
        2 => ConvexBody::Geodesic { ends: [v[0], v[1]] }.checked(),
        _ => ConvexBody::IdealPolygon { vertices: v }.checked(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn axis() -> ConvexBody {
        ConvexBody::Geodesic {
            ends: [Ideal::Real(0.0), Ideal::Infinity],
        }
    }

    #[test]
    fn axis_projection_examples() {
        let pr = project_convex(&axis(), &Point::new(1.0, 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(pr.foot.x, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pr.foot.y, 2f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(pr.dist, 1f64.asinh(), epsilon = 1e-14);
        let g = pr.grad.unwrap();
        assert_abs_diff_eq!(
            g.norm_at(&Point::new(1.0, 1.0).unwrap()),
            1.0,
            epsilon = 1e-12
        );

        let pr = project_convex(&axis(), &Point::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(pr.dist, 0.0);
        assert!(pr.grad.is_none());
    }

    #[test]
    fn disk_boundary_has_zero_distance() {
        let disk = ConvexBody::Disk {
            center: Point::I,
            radius: 1.0,
        };
        let on = Point::new(0.0, 1f64.exp()).unwrap();
        let pr = project_convex(&disk, &on).unwrap();
        assert!(pr.dist.abs() < 1e-12);
    }

    #[test]
    fn segment_clamps_to_endpoints() {
        let seg = ConvexBody::Segment {
            from: Point::I,
            to: Point::new(0.0, 3.0).unwrap(),
        };
        let pr = project_convex(&seg, &Point::new(0.0, 10.0).unwrap()).unwrap();
        assert_abs_diff_eq!(pr.foot.y, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(pr.dist, (10.0f64 / 3.0).ln(), epsilon = 1e-12);
        let pr = project_convex(&seg, &Point::new(1.0, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(pr.foot.y, 5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn hull_examples() {
        let hull = convex_hull_ideal(&[Ideal::Infinity, Ideal::Real(0.0)]).unwrap();
        assert_eq!(hull, axis());
        let tri =
            convex_hull_ideal(&[Ideal::Real(0.0), Ideal::Real(-1.0), Ideal::Infinity]).unwrap();
        // the ideal triangle {−1, 0, ∞} is the strip −1 < x < 0 above |z + 1/2| = 1/2
        assert!(tri.contains(&Point::new(-0.5, 1.0).unwrap(), 1e-12));
        assert!(!tri.contains(&Point::new(-0.5, 0.3).unwrap(), 1e-12));
        assert!(!tri.contains(&Point::new(0.5, 1.0).unwrap(), 1e-12));
        assert!(matches!(
            convex_hull_ideal(&[Ideal::Real(1.0)]),
            Err(GeomError::TooFewPoints(1))
        ));
    }

    #[test]
    fn body_json_roundtrip() {
        let poly = ConvexBody::IdealPolygon {
            vertices: vec![Ideal::Real(-1.0), Ideal::Real(0.0), Ideal::Infinity],
        };
        let s = serde_json::to_string(&poly).unwrap();
        assert!(s.contains(r#""kind":"ideal_polygon""#));
        let back: ConvexBody = serde_json::from_str(&s).unwrap();
        assert_eq!(back, poly);
    }
}
