use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{distance, Ideal, Point, Tangent};
use super::GeomError;

const DET_TOL: f64 = 1e-12;

/// Default band around `|tr| = 2` classified as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// Orientation-preserving isometry `z ↦ (az + b)/(cz + d)` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[f64; 4]> for Isometry {
    type Error = GeomError;
    fn try_from(m: [f64; 4]) -> Result<Self, Self::Error> {
        Isometry::new(m[0], m[1], m[2], m[3])
    }
}

impl From<Isometry> for [f64; 4] {
    fn from(g: Isometry) -> Self {
        g.entries()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// Fixed points of an isometry on the closed half-plane.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoints {
    pub interior: Option<Point>,
    pub ideal: Vec<Ideal>,
}

impl FixedPoints {
    pub fn count(&self) -> usize {
        self.interior.is_some() as usize + self.ideal.len()
    }
}

impl Isometry {
    /// Builds from entries; the determinant must be 1 within `1e-12`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        let det = a * d - b * c;
        if ![a, b, c, d].iter().all(|v| v.is_finite()) || (det - 1.0).abs() > DET_TOL {
            return Err(GeomError::NotUnimodular { det });
        }
        Ok(Isometry { a, b, c, d })
    }

    /// Rescales a matrix of positive determinant to determinant 1.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(GeomError::NotUnimodular { det });
        }
        let s = det.sqrt();
        Ok(Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn identity() -> Self {
        Isometry {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `z ↦ z + t`.
    pub fn translation(t: f64) -> Self {
        Isometry {
            a: 1.0,
            b: t,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `z ↦ λz`, λ > 0.
    pub fn dilation(lambda: f64) -> Result<Self, GeomError> {
        if !(lambda > 0.0) {
            return Err(GeomError::Domain(format!(
                "dilation factor {lambda} must be positive"
            )));
        }
        let s = lambda.sqrt();
        Ok(Isometry {
            a: s,
            b: 0.0,
            c: 0.0,
            d: 1.0 / s,
        })
    }

    /// Rotation by angle `theta` about `i`.
    pub fn rotation_at_i(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Isometry {
            a: c,
            b: s,
            c: -s,
            d: c,
        }
    }

    /// Rotation by `theta` about an arbitrary point.
    pub fn rotation_about(p: &Point, theta: f64) -> Self {
        let f = Isometry::frame_at(p, std::f64::consts::FRAC_PI_2);
        f.compose(&Isometry::rotation_at_i(theta))
            .compose(&f.inverse())
    }

    /// Isometry sending `i` to `p` and the upward unit vector at `i` to the
    /// direction of Euclidean angle `angle` at `p`.
    pub fn frame_at(p: &Point, angle: f64) -> Self {
        let s = p.y.sqrt();
        let lift = Isometry {
            a: s,
            b: p.x / s,
            c: 0.0,
            d: 1.0 / s,
        };
        lift.compose(&Isometry::rotation_at_i(
            angle - std::f64::consts::FRAC_PI_2,
        ))
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Isometry) -> Isometry {
        Isometry {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &Isometry) -> Isometry {
        h.compose(self).compose(&h.inverse())
    }

    pub fn apply(&self, p: &Point) -> Point {
        let z = p.z();
        let den = z * self.c + self.d;
        let w = (z * self.a + self.b) / den;
        // Im of the image is y/|cz+d|², positive by construction.
        Point {
            x: w.re,
            y: p.y / den.norm_sqr(),
        }
    }

    pub fn apply_ideal(&self, p: &Ideal) -> Ideal {
        match *p {
            Ideal::Infinity => {
                if self.c == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real(self.a / self.c)
                }
            }
            Ideal::Real(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Ideal::Infinity
                } else {
                    Ideal::Real((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Differential at `p` applied to the tangent `v`.
    pub fn push_tangent(&self, p: &Point, v: Tangent) -> Tangent {
        let den = p.z() * self.c + self.d;
        Tangent::from_complex(v.as_complex() / (den * den))
    }

    /// Whether this is `±id` up to `tol`.
    pub fn is_identity(&self, tol: f64) -> bool {
        let s = if self.a >= 0.0 { 1.0 } else { -1.0 };
        (self.a - s).abs() <= tol
            && (self.d - s).abs() <= tol
            && self.b.abs() <= tol
            && self.c.abs() <= tol
    }

    /// Classification with an explicit parabolic band.
    pub fn classify_with(&self, parabolic_tol: f64) -> IsometryClass {
        if self.is_identity(parabolic_tol) {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if (t - 2.0).abs() <= parabolic_tol {
            IsometryClass::Parabolic
        } else if t < 2.0 {
            IsometryClass::Elliptic
        } else {
            IsometryClass::Loxodromic
        }
    }

    pub fn classify(&self) -> IsometryClass {
        self.classify_with(PARABOLIC_TOL)
    }

    /// Translation length `2 arccosh(|tr|/2)` of a loxodromic element.
    pub fn translation_length(&self) -> Option<f64> {
        match self.classify() {
            IsometryClass::Loxodromic => Some(2.0 * (self.trace().abs() / 2.0).acosh()),
            _ => None,
        }
    }

    pub fn displacement(&self, p: &Point) -> f64 {
        distance(p, &self.apply(p))
    }

    /// Fixed points on the closed half-plane, consistent with [`Isometry::classify`].
    pub fn fixed_points(&self) -> FixedPoints {
        let class = self.classify();
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match class {
            IsometryClass::Identity => FixedPoints {
                interior: None,
                ideal: vec![],
            },
            IsometryClass::Elliptic => {
                // c z² + (d − a) z − b = 0 with negative discriminant; c ≠ 0.
                let disc = (a + d).powi(2) - 4.0;
                let root = Complex64::new((a - d) / (2.0 * c), (-disc).sqrt() / (2.0 * c).abs());
                FixedPoints {
                    interior: Some(Point {
                        x: root.re,
                        y: root.im,
                    }),
                    ideal: vec![],
                }
            }
            IsometryClass::Parabolic => {
                let p = if c.abs() < 1e-300 {
                    Ideal::Infinity
                } else {
                    Ideal::Real((a - d) / (2.0 * c))
                };
                FixedPoints {
                    interior: None,
                    ideal: vec![p],
                }
            }
            IsometryClass::Loxodromic => {
                let disc = ((a + d).powi(2) - 4.0).sqrt();
                let ideal = if c == 0.0 {
                    vec![Ideal::Infinity, Ideal::Real(b / (d - a))]
                } else {
                    vec![
                        Ideal::Real((a - d + disc) / (2.0 * c)),
                        Ideal::Real((a - d - disc) / (2.0 * c)),
                    ]
                };
                FixedPoints {
                    interior: None,
                    ideal,
                }
            }
        }
    }

    /// The attracting boundary fixed point of a parabolic or loxodromic element.
    pub fn attracting_fixed_point(&self) -> Option<Ideal> {
        let fp = self.fixed_points();
        match self.classify() {
            IsometryClass::Parabolic => fp.ideal.first().copied(),
            IsometryClass::Loxodromic => fp.ideal.into_iter().find(|xi| self.is_attracting(xi)),
            _ => None,
        }
    }

    fn is_attracting(&self, xi: &Ideal) -> bool {
        match *xi {
            // Near ∞ the map is (a/d) z + b/d.
            Ideal::Infinity => (self.a / self.d).abs() > 1.0,
            Ideal::Real(x) => (self.c * x + self.d).abs() > 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn classification_examples() {
        assert_eq!(
            Isometry::translation(1.0).classify(),
            IsometryClass::Parabolic
        );
        assert_eq!(
            Isometry::rotation_at_i(PI / 4.0).classify(),
            IsometryClass::Elliptic
        );
        let g = Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(g.classify(), IsometryClass::Loxodromic);
        assert_abs_diff_eq!(
            g.translation_length().unwrap(),
            2.0 * 2f64.ln(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(g.displacement(&Point::I), 2.0 * 2f64.ln(), epsilon = 1e-14);
        assert_eq!(
            Isometry::new(-1.0, 0.0, 0.0, -1.0).unwrap().classify(),
            IsometryClass::Identity
        );
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(
            Isometry::new(2.0, 0.0, 0.0, 1.0),
            Err(GeomError::NotUnimodular { .. })
        ));
        let g = Isometry::normalized(2.0, 0.0, 0.0, 8.0).unwrap();
        assert_abs_diff_eq!(g.entries()[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn displacement_examples() {
        let t = Isometry::translation(1.0);
        assert_eq!(Isometry::identity().displacement(&Point::I), 0.0);
        assert_abs_diff_eq!(t.displacement(&Point::I), 1.5f64.acosh(), epsilon = 1e-14);
        let high = Point::new(0.0, 10.0).unwrap();
        assert_abs_diff_eq!(
            t.displacement(&high),
            (1.0 + 1.0 / 200.0f64).acosh(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn rotation_fixes_its_center() {
        let p = Point::new(0.4, 1.7).unwrap();
        let r = Isometry::rotation_about(&p, 1.1);
        let q = r.apply(&p);
        assert_abs_diff_eq!(q.x, p.x, epsilon = 1e-12);
        assert_abs_diff_eq!(q.y, p.y, epsilon = 1e-12);
        let fp = r.fixed_points().interior.unwrap();
        assert_abs_diff_eq!(fp.x, p.x, epsilon = 1e-10);
        assert_abs_diff_eq!(fp.y, p.y, epsilon = 1e-10);
    }

    #[test]
    fn fixed_point_counts() {
        assert_eq!(Isometry::rotation_at_i(0.3).fixed_points().count(), 1);
        assert_eq!(
            Isometry::translation(2.0).fixed_points().ideal,
            vec![Ideal::Infinity]
        );
        let g = Isometry::new(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(g.fixed_points().count(), 2);
        assert_eq!(g.attracting_fixed_point(), Some(Ideal::Infinity));
        assert_eq!(g.inverse().attracting_fixed_point(), Some(Ideal::Real(0.0)));
    }

    #[test]
    fn frame_sends_i_to_point() {
        let p = Point::new(-0.7, 0.3).unwrap();
        let f = Isometry::frame_at(&p, 0.9);
        let q = f.apply(&Point::I);
        assert_abs_diff_eq!(q.x, p.x, epsilon = 1e-14);
        assert_abs_diff_eq!(q.y, p.y, epsilon = 1e-14);
        let v = f.push_tangent(&Point::I, Tangent { dx: 0.0, dy: 1.0 });
        assert_abs_diff_eq!(v.dy.atan2(v.dx), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn json_row_major() {
        let g = Isometry::translation(3.0);
        assert_eq!(serde_json::to_string(&g).unwrap(), "[1.0,3.0,0.0,1.0]");
        assert!(serde_json::from_str::<Isometry>("[1,1,1,1]").is_err());
    }
}
