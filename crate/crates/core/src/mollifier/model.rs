use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MollifierError;

/// Model plane in a single global chart: the Euclidean plane, or the
/// hyperbolic plane as the Poincaré disk with curvature −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Euclidean,
    Hyperbolic,
}

/// Largest smoothing radius accepted in the disk chart; beyond it the
/// exponential map crowds the chart boundary and loses precision.
pub const MAX_DISK_KAPPA: f64 = 4.0;

impl Model {
    /// Conformal factor: the metric is `λ(z)² |dz|²`.
    pub fn conformal_factor(self, z: Complex64) -> f64 {
        match self {
            Model::Euclidean => 1.0,
            Model::Hyperbolic => 2.0 / (1.0 - z.norm_sqr()),
        }
    }

    /// Upper bound on `|K|`.
    pub fn curvature_bound(self) -> f64 {
        match self {
            Model::Euclidean => 0.0,
            Model::Hyperbolic => 1.0,
        }
    }

    pub fn check_point(self, z: Complex64) -> Result<(), MollifierError> {
        if !z.re.is_finite()
            || !z.im.is_finite()
            || (self == Model::Hyperbolic && z.norm_sqr() >= 1.0)
        {
            return Err(MollifierError::OutsideChart { x: z.re, y: z.im });
        }
        Ok(())
    }

    pub fn check_kappa(self, kappa: f64) -> Result<(), MollifierError> {
        let limit = match self {
            Model::Euclidean => f64::INFINITY,
            Model::Hyperbolic => MAX_DISK_KAPPA,
        };
        if !(kappa > 0.0) || !(kappa <= limit) {
            return Err(MollifierError::ChartScale { kappa, limit });
        }
        Ok(())
    }

    pub fn distance(self, z: Complex64, w: Complex64) -> f64 {
        match self {
            Model::Euclidean => (z - w).norm(),
            Model::Hyperbolic => {
                let m = ((z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)).norm();
                2.0 * m.min(1.0 - 1e-16).atanh()
            }
        }
    }

    /// Point at distance `s` from `c` in the chart direction `e^{iθ}`.
    pub fn point_at(self, c: Complex64, theta: f64, s: f64) -> Complex64 {
        let u = Complex64::from_polar(1.0, theta);
        match self {
            Model::Euclidean => c + u * s,
            Model::Hyperbolic => mobius_from_origin(c, u * (s / 2.0).tanh()),
        }
    }

    /// Rotation by `angle` about `c`.
    pub fn rotation_about(self, c: Complex64, angle: f64) -> impl Fn(Complex64) -> Complex64 {
        let u = Complex64::from_polar(1.0, angle);
        move |z| match self {
            Model::Euclidean => c + u * (z - c),
            Model::Hyperbolic => mobius_from_origin(c, u * mobius_to_origin(c, z)),
        }
    }

    /// Translation moving the chart origin to `a`.
    pub fn translation(self, a: Complex64) -> impl Fn(Complex64) -> Complex64 {
        move |z| match self {
            Model::Euclidean => z + a,
            Model::Hyperbolic => mobius_from_origin(a, z),
        }
    }
}

/// `T_x(p) = (p + x)/(1 + x̄ p)`, the disk isometry with `T_x(0) = x` and
/// positive real derivative at 0.
pub(crate) fn mobius_from_origin(x: Complex64, p: Complex64) -> Complex64 {
    (p + x) / (Complex64::new(1.0, 0.0) + x.conj() * p)
}

pub(crate) fn mobius_to_origin(x: Complex64, z: Complex64) -> Complex64 {
    (z - x) / (Complex64::new(1.0, 0.0) - x.conj() * z)
}

type AngleFn = dyn Fn(Complex64) -> (f64, f64, f64) + Send + Sync;

/// Orthonormal frame field: the normalized coordinate frame rotated by an
/// angle `θ(z)`. The angle function returns `(θ, ∂θ/∂x, ∂θ/∂y)`.
#[derive(Clone, Default)]
pub struct Frame {
    angle: Option<Arc<AngleFn>>,
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.angle.is_some() {
            "Frame(rotated)"
        } else {
            "Frame(coordinate)"
        })
    }
}

impl Frame {
    pub fn coordinate() -> Self {
        Frame { angle: None }
    }

    pub fn rotated(angle: impl Fn(Complex64) -> (f64, f64, f64) + Send + Sync + 'static) -> Self {
        Frame {
            angle: Some(Arc::new(angle)),
        }
    }

    fn angle(&self, z: Complex64) -> (f64, f64, f64) {
        self.angle.as_ref().map_or((0.0, 0.0, 0.0), |a| a(z))
    }

    /// Orthonormality defect `|⟨e_i, e_j⟩ − δ_ij|` of the frame at `z`; the
    /// construction makes it vanish up to rounding.
    pub fn orthonormality_defect(&self, model: Model, z: Complex64) -> f64 {
        let (t, _, _) = self.angle(z);
        let lam = model.conformal_factor(z);
        let e1 = Complex64::from_polar(1.0 / lam, t);
        let e2 = e1 * Complex64::i();
        let g = |a: Complex64, b: Complex64| lam * lam * (a.re * b.re + a.im * b.im);
        (g(e1, e1) - 1.0)
            .abs()
            .max((g(e2, e2) - 1.0).abs())
            .max(g(e1, e2).abs())
    }
}

/// `g(x, v) = exp F(x, v)` and its real partial derivatives in `x`.
pub(crate) struct FrameExp {
    pub point: Complex64,
    pub d_dx: Complex64,
    pub d_dy: Complex64,
}

/// Evaluates `exp F(x, v)` for `v` given by its length and frame angle.
pub(crate) fn frame_exp(
    model: Model,
    frame: &Frame,
    x: Complex64,
    len: f64,
    dir: f64,
    with_derivative: bool,
) -> FrameExp {
    let (t, tx, ty) = frame.angle(x);
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    match model {
        Model::Euclidean => {
            let p = Complex64::from_polar(len, t + dir);
            FrameExp {
                point: x + p,
                d_dx: one + i * p * tx,
                d_dy: i + i * p * ty,
            }
        }
        Model::Hyperbolic => {
            let p = Complex64::from_polar((len / 2.0).tanh(), t + dir);
            let den = one + x.conj() * p;
            let point = (p + x) / den;
            if !with_derivative {
                return FrameExp {
                    point,
                    d_dx: Complex64::default(),
                    d_dy: Complex64::default(),
                };
            }
            let gx = one / den;
            let gxb = -p * (p + x) / (den * den);
            let gp = (1.0 - x.norm_sqr()) / (den * den);
            FrameExp {
                point,
                d_dx: gx + gxb + gp * i * p * tx,
                d_dy: i * gx - i * gxb + gp * i * p * ty,
            }
        }
    }
}
