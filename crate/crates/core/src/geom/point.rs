use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GeomError;

/// Interior point of the upper half-plane, `y > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for Point {
    type Error = GeomError;
    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        Point::new(raw.x, raw.y)
    }
}

impl Point {
    /// The point `i`.
    pub const I: Point = Point { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, GeomError> {
        if !x.is_finite() || !y.is_finite() || y <= 0.0 {
            return Err(GeomError::Domain(format!(
                "({x}, {y}) is not an interior point of the upper half-plane"
            )));
        }
        Ok(Point { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeomError> {
        Point::new(z.re, z.im)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// Point of the ideal boundary `ℝ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IdealRepr", into = "IdealRepr")]
pub enum Ideal {
    Real(f64),
    Infinity,
}

#[derive(Serialize, Deserialize)]
struct IdealRepr {
    ideal: IdealValue,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IdealValue {
    Real(f64),
    Tag(String),
}

impl TryFrom<IdealRepr> for Ideal {
    type Error = String;
    fn try_from(repr: IdealRepr) -> Result<Self, Self::Error> {
        match repr.ideal {
            IdealValue::Real(x) if x.is_finite() => Ok(Ideal::Real(x)),
            IdealValue::Real(x) => Err(format!("ideal point {x} is not finite; use \"inf\"")),
            IdealValue::Tag(tag) if tag == "inf" => Ok(Ideal::Infinity),
            IdealValue::Tag(tag) => Err(format!("unknown ideal point tag {tag:?}")),
        }
    }
}

impl From<Ideal> for IdealRepr {
    fn from(p: Ideal) -> Self {
        let ideal = match p {
            Ideal::Real(x) => IdealValue::Real(x),
            Ideal::Infinity => IdealValue::Tag("inf".into()),
        };
        IdealRepr { ideal }
    }
}

impl Ideal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ideal::Infinity)
    }

    /// Key for the circular order of `ℝ ∪ {∞}`: reals ascending, `∞` last.
    pub(crate) fn order_key(&self) -> f64 {
        match *self {
            Ideal::Real(x) => x,
            Ideal::Infinity => f64::INFINITY,
        }
    }

    /// Approximate equality; reals compared relative to their magnitude.
    pub fn approx_eq(&self, other: &Ideal, tol: f64) -> bool {
        match (*self, *other) {
            (Ideal::Infinity, Ideal::Infinity) => true,
            (Ideal::Real(a), Ideal::Real(b)) => (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())),
            (Ideal::Real(a), Ideal::Infinity) | (Ideal::Infinity, Ideal::Real(a)) => {
                a.abs() > 1.0 / tol
            }
        }
    }
}

/// Tangent vector in Euclidean coordinates of the upper half-plane chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tangent {
    pub dx: f64,
    pub dy: f64,
}

impl Tangent {
    pub fn from_complex(v: Complex64) -> Self {
        Tangent { dx: v.re, dy: v.im }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.dx, self.dy)
    }

    /// Riemannian length at `base`.
    pub fn norm_at(&self, base: &Point) -> f64 {
        self.dx.hypot(self.dy) / base.y
    }
}

/// Hyperbolic distance in the upper half-plane.
///
/// Uses `d = 2 asinh(|p − q| / (2 √(y_p y_q)))`, which agrees with
/// `arccosh(1 + |p−q|²/(2 y_p y_q))` and stays accurate for nearby points.
pub fn distance(p: &Point, q: &Point) -> f64 {
    let chord = (p.x - q.x).hypot(p.y - q.y);
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Exponential map: follow the geodesic from `p` with initial velocity `v`
/// for unit time.
pub fn exp_map(p: &Point, v: Tangent) -> Point {
    let vi = v.as_complex() / p.y;
    let t = vi.norm();
    if t == 0.0 {
        return *p;
    }
    let i = Complex64::i();
    // At i the Cayley chart w = (z − i)/(z + i) sends a tangent u to −i u / 2.
    let w = (-i * vi / t) * (t / 2.0).tanh();
    let z = i * (1.0 + w) / (1.0 - w);
    Point {
        x: p.x + p.y * z.re,
        y: p.y * z.im,
    }
}

/// Inverse of [`exp_map`]: the initial velocity at `p` reaching `q` at unit time.
pub fn log_map(p: &Point, q: &Point) -> Tangent {
    let i = Complex64::i();
    let qi = (q.z() - p.x) / p.y;
    let w = (qi - i) / (qi + i);
    let r = w.norm();
    if r == 0.0 {
        return Tangent { dx: 0.0, dy: 0.0 };
    }
    let t = 2.0 * r.min(1.0 - 1e-16).atanh();
    Tangent::from_complex(i * w / r * t * p.y)
}

/// Point at fraction `s` of the geodesic segment from `p` to `q`.
pub fn geodesic_point(p: &Point, q: &Point, s: f64) -> Point {
    let v = log_map(p, q);
    exp_map(
        p,
        Tangent {
            dx: v.dx * s,
            dy: v.dy * s,
        },
    )
}

/// Unit tangent at `p` pointing away from `q` along the geodesic through both.
pub fn unit_away_from(p: &Point, q: &Point) -> Option<Tangent> {
    let v = log_map(p, q);
    let n = v.norm_at(p);
    if n == 0.0 {
        return None;
    }
    Some(Tangent {
        dx: -v.dx / n,
        dy: -v.dy / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn distance_examples() {
        let i = Point::I;
        assert_eq!(distance(&i, &i), 0.0);
        // ∫_1^4 dy/y
        assert_abs_diff_eq!(
            distance(&i, &Point::new(0.0, 4.0).unwrap()),
            4f64.ln(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            distance(&i, &Point::new(1.0, 1.0).unwrap()),
            1.5f64.acosh(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn rejects_boundary_points() {
        assert!(matches!(Point::new(0.0, 0.0), Err(GeomError::Domain(_))));
        assert!(Point::new(1.0, -2.0).is_err());
        assert!(Point::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn exp_log_roundtrip() {
        let p = Point::new(0.3, 0.7).unwrap();
        let q = Point::new(-1.2, 2.5).unwrap();
        let v = log_map(&p, &q);
        assert_abs_diff_eq!(v.norm_at(&p), distance(&p, &q), epsilon = 1e-12);
        let back = exp_map(&p, v);
        assert_abs_diff_eq!(back.x, q.x, epsilon = 1e-11);
        assert_abs_diff_eq!(back.y, q.y, epsilon = 1e-11);
    }

    #[test]
    fn exp_up_the_axis() {
        let p = exp_map(&Point::I, Tangent { dx: 0.0, dy: 2.0 });
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.y, 2f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn midpoint_is_equidistant() {
        let p = Point::new(-2.0, 0.5).unwrap();
        let q = Point::new(3.0, 1.5).unwrap();
        let m = geodesic_point(&p, &q, 0.5);
        assert_abs_diff_eq!(distance(&p, &m), distance(&m, &q), epsilon = 1e-11);
        assert_abs_diff_eq!(2.0 * distance(&p, &m), distance(&p, &q), epsilon = 1e-11);
    }

    #[test]
    fn ideal_json_schema() {
        let s = serde_json::to_string(&Ideal::Infinity).unwrap();
        assert_eq!(s, r#"{"ideal":"inf"}"#);
        let s = serde_json::to_string(&Ideal::Real(-1.5)).unwrap();
        assert_eq!(s, r#"{"ideal":-1.5}"#);
        let p: Ideal = serde_json::from_str(r#"{"ideal":"inf"}"#).unwrap();
        assert_eq!(p, Ideal::Infinity);
        assert!(serde_json::from_str::<Ideal>(r#"{"ideal":"nan"}"#).is_err());
        assert!(serde_json::from_str::<Point>(r#"{"x":0,"y":-1}"#).is_err());
    }
}
