use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sturm::tridiagonal_eigenvalue;
use super::SpectralError;

/// Model end of a hyperbolic surface with metric `dt² + f(t)² dθ²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndKind {
    /// `f = cosh t` on `[0, T]`.
    Funnel,
    /// `f = e^{−t}` on `[0, T]`.
    Cusp,
    /// `f = cosh t` on `[−T, T]`, both funnels of a hyperbolic cylinder.
    Cylinder,
}

impl fmt::Display for EndKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndKind::Funnel => "funnel",
            EndKind::Cusp => "cusp",
            EndKind::Cylinder => "cylinder",
        })
    }
}

impl FromStr for EndKind {
    type Err = SpectralError;
    fn from_str(s: &str) -> Result<Self, SpectralError> {
        match s {
            "funnel" => Ok(EndKind::Funnel),
            "cusp" => Ok(EndKind::Cusp),
            "cylinder" => Ok(EndKind::Cylinder),
            other => Err(SpectralError::UnknownEnd(other.to_string())),
        }
    }
}

/// Warped end together with a Fourier mode along the circle factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedEnd {
    pub kind: EndKind,
    #[serde(default)]
    pub mode: i64,
    /// Length of the circle parametrized by `θ`.
    #[serde(default = "default_circle")]
    pub circle_length: f64,
}

fn default_circle() -> f64 {
    std::f64::consts::TAU
}

impl WarpedEnd {
    pub fn new(kind: EndKind, mode: i64) -> Self {
        WarpedEnd {
            kind,
            mode,
            circle_length: default_circle(),
        }
    }

    pub fn warp(&self, t: f64) -> f64 {
        match self.kind {
            EndKind::Funnel | EndKind::Cylinder => t.cosh(),
            EndKind::Cusp => (-t).exp(),
        }
    }

    /// `(f′/f, (f′/f)′)`.
    pub fn log_derivative(&self, t: f64) -> (f64, f64) {
        match self.kind {
            EndKind::Funnel | EndKind::Cylinder => {
                let th = t.tanh();
                (th, 1.0 - th * th)
            }
            EndKind::Cusp => (-1.0, 0.0),
        }
    }

    /// Interval of the truncated end of length `t_max`.
    pub fn domain(&self, t_max: f64) -> (f64, f64) {
        match self.kind {
            EndKind::Cylinder => (-t_max, t_max),
            _ => (0.0, t_max),
        }
    }

    fn frequency(&self) -> f64 {
        std::f64::consts::TAU * self.mode as f64 / self.circle_length
    }

    /// `W = ¼(f′/f)² + ½(f′/f)′ + ω²/f²` with `ω = 2πn / length`.
    pub fn potential(&self, t: f64) -> f64 {
        let (q, dq) = self.log_derivative(t);
        let w = self.frequency();
        let f = self.warp(t);
        0.25 * q * q + 0.5 * dq + if w == 0.0 { 0.0 } else { w * w / (f * f) }
    }

    /// Value of `W` at infinity, the essential-bottom reading.
    pub fn potential_limit(&self) -> f64 {
        match (self.kind, self.mode) {
            (EndKind::Cusp, n) if n != 0 => f64::INFINITY,
            _ => 0.25,
        }
    }
}

/// `−d²/dt² + W` on `[a, b]` with Dirichlet conditions, sampled on the
/// interior nodes of a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schrodinger1D {
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub potential: Vec<f64>,
}

pub const MIN_NODES: usize = 100;

impl Schrodinger1D {
    /// Samples `w` with spacing close to `h`, dividing `[a, b]` evenly.
    pub fn sample(a: f64, b: f64, h: f64, w: impl Fn(f64) -> f64) -> Result<Self, SpectralError> {
        if !(b > a) || !(h > 0.0) {
            return Err(SpectralError::Grid(format!(
                "interval [{a}, {b}] with spacing {h}"
            )));
        }
        let n = ((b - a) / h).round().max(1.0) as usize;
        if n < MIN_NODES {
            return Err(SpectralError::Grid(format!(
                "{n} intervals; at least {MIN_NODES} are needed"
            )));
        }
        let h = (b - a) / n as f64;
        let potential: Vec<f64> = (1..n).map(|i| w(a + i as f64 * h)).collect();
        if let Some(i) = potential.iter().position(|v| !v.is_finite()) {
            return Err(SpectralError::NonFinite {
                t: a + (i + 1) as f64 * h,
            });
        }
        Ok(Schrodinger1D { a, b, h, potential })
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.potential.len()).map(move |i| self.a + i as f64 * self.h)
    }

    fn tridiagonal(&self) -> (Vec<f64>, Vec<f64>) {
        let h2 = self.h * self.h;
        let d = self.potential.iter().map(|w| 2.0 / h2 + w).collect();
        let e = vec![-1.0 / h2; self.potential.len() - 1];
        (d, e)
    }

    /// `k`-th Dirichlet eigenvalue of the three-point discretization.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (d, e) = self.tridiagonal();
        tridiagonal_eigenvalue(&d, &e, k)
    }
}

/// Separation of variables on a truncated end with grid spacing `h`.
pub fn radial_reduce(end: &WarpedEnd, t_max: f64, h: f64) -> Result<Schrodinger1D, SpectralError> {
    let (a, b) = end.domain(t_max);
    let op = Schrodinger1D::sample(a, b, h, |t| end.potential(t))?;
    for t in op.nodes() {
        let f = end.warp(t);
        if !(f > 0.0) || !f.is_finite() {
            return Err(SpectralError::Degenerate { t });
        }
    }
    Ok(op)
}

pub fn eigen_bottom(op: &Schrodinger1D) -> f64 {
    op.eigenvalue(0)
}
