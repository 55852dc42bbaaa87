use std::f64::consts::TAU;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::{frame_exp, Frame, Model};
use super::target::TargetFn;
use super::MollifierError;

/// Radial profile: constant on `[0, plateau]`, a C^∞ descent to 0 on
/// `[plateau, 1]`, unnormalized.
pub fn bump_profile(r: f64, plateau: f64) -> f64 {
    let t = (r - plateau) / (1.0 - plateau);
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    b / (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MollifierConfig {
    /// Smoothing radius.
    pub kappa: f64,
    /// Gauss–Legendre nodes on each radial panel: one on the plateau and
    /// three on the descent.
    pub radial_order: usize,
    /// Equally spaced angular nodes.
    pub angular_order: usize,
    /// Radius (in units of κ) up to which the bump is constant.
    pub plateau: f64,
}

impl Default for MollifierConfig {
    fn default() -> Self {
        MollifierConfig {
            kappa: 0.1,
            radial_order: 16,
            angular_order: 32,
            plateau: 0.25,
        }
    }
}

/// Frame-averaging operator `f ↦ f_κ` with a fixed polar quadrature.
#[derive(Clone, Debug)]
pub struct Mollifier {
    model: Model,
    frame: Frame,
    cfg: MollifierConfig,
    /// `(radius / κ, weight)` with the bump, polar Jacobian and angular step folded in.
    radial: Vec<(f64, f64)>,
    angles: Vec<f64>,
    normalization_error: f64,
}

const DESCENT_PANELS: usize = 3;

fn panel_nodes(rule: &GaussLegendre, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    rule.iter().map(move |(x, w)| (m + h * *x, h * *w))
}

/// Composite radial rule on `[0, 1]` with the unnormalized bump and the
/// polar Jacobian folded into the weights.
fn radial_rule(order: usize, plateau: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(order.try_into().expect("order ≥ 2"));
    let step = (1.0 - plateau) / DESCENT_PANELS as f64;
    let mut out: Vec<(f64, f64)> = panel_nodes(&rule, 0.0, plateau).collect();
    for k in 0..DESCENT_PANELS {
        let a = plateau + step * k as f64;
        out.extend(panel_nodes(&rule, a, a + step));
    }
    out.into_iter()
        .map(|(r, w)| (r, w * r * bump_profile(r, plateau)))
        .collect()
}

impl Mollifier {
    pub fn new(model: Model, frame: Frame, cfg: MollifierConfig) -> Result<Self, MollifierError> {
        model.check_kappa(cfg.kappa)?;
        if cfg.radial_order < 2 || cfg.angular_order < 4 {
            return Err(MollifierError::InvalidConfig(
                "quadrature orders too small".into(),
            ));
        }
        if !(cfg.plateau > 0.0 && cfg.plateau < 1.0) {
            return Err(MollifierError::InvalidConfig(format!(
                "plateau {} must lie in (0, 1)",
                cfg.plateau
            )));
        }
        let raw = radial_rule(cfg.radial_order, cfg.plateau);
        let total: f64 = raw.iter().map(|(_, w)| w).sum::<f64>() * TAU;
        let step = TAU / cfg.angular_order as f64;
        let radial = raw
            .into_iter()
            .map(|(r, w)| (r, w * step / total))
            .collect();
        let angles = (0..cfg.angular_order).map(|j| step * j as f64).collect();
        // independent check of the normalization with a finer rule
        let reference: f64 = radial_rule(4 * cfg.radial_order, cfg.plateau)
            .iter()
            .map(|(_, w)| w)
            .sum::<f64>()
            * TAU;
        let normalization_error = (reference / total - 1.0).abs();
        Ok(Mollifier {
            model,
            frame,
            cfg,
            radial,
            angles,
            normalization_error,
        })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn config(&self) -> &MollifierConfig {
        &self.cfg
    }

    pub fn with_frame(&self, frame: Frame) -> Self {
        Mollifier {
            frame,
            ..self.clone()
        }
    }

    /// Relative error of the quadrature's bump mass against a finer rule.
    pub fn normalization_error(&self) -> f64 {
        self.normalization_error
    }

    /// `f_κ(x) = ∫ φ_κ(|v|) f(exp F(x, v)) dv`.
    pub fn smooth(&self, f: &dyn TargetFn, x: Complex64) -> Result<f64, MollifierError> {
        self.model.check_point(x)?;
        let mut s = 0.0;
        for &(r, w) in &self.radial {
            let len = r * self.cfg.kappa;
            for &a in &self.angles {
                s += w * f.value(frame_exp(self.model, &self.frame, x, len, a, false).point);
            }
        }
        Ok(s)
    }

    /// Coordinate gradient of `f_κ` by differentiating under the integral.
    pub fn smooth_coord_gradient(
        &self,
        f: &dyn TargetFn,
        x: Complex64,
    ) -> Result<Complex64, MollifierError> {
        self.model.check_point(x)?;
        let (mut gx, mut gy) = (0.0, 0.0);
        for &(r, w) in &self.radial {
            let len = r * self.cfg.kappa;
            for &a in &self.angles {
                let g = frame_exp(self.model, &self.frame, x, len, a, true);
                let df = f.gradient(g.point);
                gx += w * (df.re * g.d_dx.re + df.im * g.d_dx.im);
                gy += w * (df.re * g.d_dy.re + df.im * g.d_dy.im);
            }
        }
        Ok(Complex64::new(gx, gy))
    }

    /// Riemannian gradient of `f_κ` in the normalized coordinate frame.
    pub fn smooth_gradient(
        &self,
        f: &dyn TargetFn,
        x: Complex64,
    ) -> Result<[f64; 2], MollifierError> {
        let g = self.smooth_coord_gradient(f, x)? / self.model.conformal_factor(x);
        Ok([g.re, g.im])
    }

    /// Largest `|f_κ(γx) − f_κ(x)|` over the samples and maps.
    pub fn equivariance_defect(
        &self,
        f: &dyn TargetFn,
        maps: &[&dyn Fn(Complex64) -> Complex64],
        samples: &[Complex64],
    ) -> Result<f64, MollifierError> {
        let mut worst = 0.0f64;
        for &x in samples {
            let base = self.smooth(f, x)?;
            for g in maps {
                worst = worst.max((self.smooth(f, g(x))? - base).abs());
            }
        }
        Ok(worst)
    }

    /// Asymmetry of the coordinate Hessian of `f_κ` from differences of
    /// the quadrature gradient.
    pub fn hessian_asymmetry(
        &self,
        f: &dyn TargetFn,
        x: Complex64,
        h: f64,
    ) -> Result<f64, MollifierError> {
        let hy = Complex64::new(0.0, h);
        let gxp = self.smooth_coord_gradient(f, x + h)?;
        let gxm = self.smooth_coord_gradient(f, x - h)?;
        let gyp = self.smooth_coord_gradient(f, x + hy)?;
        let gym = self.smooth_coord_gradient(f, x - hy)?;
        let fxy = (gyp.re - gym.re) / (2.0 * h);
        let fyx = (gxp.im - gxm.im) / (2.0 * h);
        Ok((fxy - fyx).abs())
    }
}

/// Worst observed `|f_κ − f|` and `|∇f_κ − ∇f|` on a sample set, next to
/// the bounds `ℓκ` and `(ℓb + β)κ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub kappa: f64,
    pub value_deviation: f64,
    pub value_bound: f64,
    pub gradient_deviation: f64,
    pub gradient_bound: f64,
    pub value_violations: usize,
    pub gradient_violations: usize,
    pub samples: usize,
}

pub fn check_bounds(
    moll: &Mollifier,
    f: &dyn TargetFn,
    reg: super::target::Regularity,
    samples: &[Complex64],
) -> Result<BoundCheck, MollifierError> {
    let kappa = moll.config().kappa;
    let b = moll.model().curvature_bound();
    if b * kappa > 1.0 {
        return Err(MollifierError::Precondition(format!(
            "the gradient bound needs bκ ≤ 1, got {}",
            b * kappa
        )));
    }
    let value_bound = reg.ell * kappa;
    let gradient_bound = (reg.ell * b + reg.beta) * kappa;
    let mut out = BoundCheck {
        kappa,
        value_deviation: 0.0,
        value_bound,
        gradient_deviation: 0.0,
        gradient_bound,
        value_violations: 0,
        gradient_violations: 0,
        samples: samples.len(),
    };
    for &x in samples {
        let dv = (moll.smooth(f, x)? - f.value(x)).abs();
        let g = moll.smooth_gradient(f, x)?;
        let g0 = f.gradient(x) / moll.model().conformal_factor(x);
        let dg = (g[0] - g0.re).hypot(g[1] - g0.im);
        out.value_deviation = out.value_deviation.max(dv);
        out.gradient_deviation = out.gradient_deviation.max(dg);
        out.value_violations += usize::from(dv > value_bound);
        out.gradient_violations += usize::from(dg > gradient_bound);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollifier::target::{Affine, Constant, DiskDistance, Regularity};

    fn rotated() -> Frame {
        Frame::rotated(|z| {
            (
                0.7 + 1.3 * z.re + 0.4 * z.norm_sqr(),
                1.3 + 0.8 * z.re,
                0.8 * z.im,
            )
        })
    }

    #[test]
    fn normalization_is_accurate() {
        let m = Mollifier::new(
            Model::Euclidean,
            Frame::coordinate(),
            MollifierConfig::default(),
        )
        .unwrap();
        assert!(m.normalization_error() < 1e-10);
        let total: f64 = m.radial.iter().map(|(_, w)| w).sum::<f64>() * m.angles.len() as f64;
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constants_and_affine_functions_are_fixed() {
        let cfg = MollifierConfig {
            kappa: 0.3,
            ..Default::default()
        };
        let e = Mollifier::new(Model::Euclidean, rotated(), cfg).unwrap();
        let x = Complex64::new(0.4, -1.2);
        assert!((e.smooth(&Constant(2.5), x).unwrap() - 2.5).abs() < 1e-14);
        let aff = Affine {
            a: 1.5,
            b: -0.5,
            c: 0.2,
        };
        assert!((e.smooth(&aff, x).unwrap() - aff.value(x)).abs() < 1e-13);
        let g = e.smooth_gradient(&aff, x).unwrap();
        assert!((g[0] - 1.5).abs() < 1e-13 && (g[1] + 0.5).abs() < 1e-13);
        let h = Mollifier::new(Model::Hyperbolic, rotated(), cfg).unwrap();
        assert!((h.smooth(&Constant(-1.0), Complex64::new(0.3, 0.3)).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn frame_independence() {
        let f = DiskDistance::new(Model::Hyperbolic, Complex64::new(0.05, 0.0), 1.0).unwrap();
        let cfg = MollifierConfig {
            kappa: 0.1,
            ..Default::default()
        };
        let a = Mollifier::new(Model::Hyperbolic, Frame::coordinate(), cfg).unwrap();
        let b = a.with_frame(rotated());
        for x in [Complex64::new(0.7, 0.1), Complex64::new(-0.3, 0.62)] {
            assert!(f.value(x) > 0.1);
            assert!((a.smooth(&f, x).unwrap() - b.smooth(&f, x).unwrap()).abs() < 1e-8);
            let (ga, gb) = (
                a.smooth_gradient(&f, x).unwrap(),
                b.smooth_gradient(&f, x).unwrap(),
            );
            assert!((ga[0] - gb[0]).abs() < 1e-8 && (ga[1] - gb[1]).abs() < 1e-8);
        }
    }

    #[test]
    fn gradient_matches_differences_of_values() {
        let f = DiskDistance::new(Model::Hyperbolic, Complex64::default(), 0.5).unwrap();
        let m = Mollifier::new(
            Model::Hyperbolic,
            rotated(),
            MollifierConfig {
                kappa: 0.2,
                ..Default::default()
            },
        )
        .unwrap();
        let x = Complex64::new(0.5, 0.3);
        let h = 1e-5;
        let dx = (m.smooth(&f, x + h).unwrap() - m.smooth(&f, x - h).unwrap()) / (2.0 * h);
        let hy = Complex64::new(0.0, h);
        let dy = (m.smooth(&f, x + hy).unwrap() - m.smooth(&f, x - hy).unwrap()) / (2.0 * h);
        let g = m.smooth_coord_gradient(&f, x).unwrap();
        assert!((g - Complex64::new(dx, dy)).norm() < 1e-7 * g.norm());
        assert!(m.hessian_asymmetry(&f, x, 1e-4).unwrap() < 1e-6);
    }

    #[test]
    fn euclidean_disk_bounds() {
        let f = DiskDistance::new(Model::Euclidean, Complex64::default(), 1.0).unwrap();
        let m = Mollifier::new(
            Model::Euclidean,
            Frame::coordinate(),
            MollifierConfig {
                kappa: 0.1,
                ..Default::default()
            },
        )
        .unwrap();
        // the κ-balls stay outside the disk, where the distance is C^{1,1}
        let samples: Vec<Complex64> = (0..40)
            .map(|k| Complex64::from_polar(1.12 + 0.05 * k as f64, 0.37 * k as f64))
            .collect();
        let r = check_bounds(
            &m,
            &f,
            Regularity {
                ell: 1.0,
                beta: 1.0,
            },
            &samples,
        )
        .unwrap();
        assert_eq!(r.value_violations, 0);
        assert!(r.value_deviation <= 0.1);
        assert_eq!(r.gradient_violations, 0, "{r:?}");
    }

    #[test]
    fn symmetry_and_negative_control() {
        let c = Complex64::new(0.2, -0.1);
        let f = DiskDistance::new(Model::Hyperbolic, c, 0.8).unwrap();
        let m = Mollifier::new(
            Model::Hyperbolic,
            rotated(),
            MollifierConfig {
                kappa: 0.1,
                ..Default::default()
            },
        )
        .unwrap();
        let rots: Vec<_> = (1..6)
            .map(|k| Model::Hyperbolic.rotation_about(c, TAU * k as f64 / 6.0))
            .collect();
        let maps: Vec<&dyn Fn(Complex64) -> Complex64> = rots
            .iter()
            .map(|r| r as &dyn Fn(Complex64) -> Complex64)
            .collect();
        let samples = [Complex64::new(0.75, 0.2), Complex64::new(-0.5, -0.55)];
        assert!(m.equivariance_defect(&f, &maps, &samples).unwrap() < 1e-8);
        let id = |z: Complex64| z;
        assert_eq!(m.equivariance_defect(&f, &[&id], &samples).unwrap(), 0.0);
        let shift = Model::Hyperbolic.translation(Complex64::new(0.3, 0.0));
        assert!(m.equivariance_defect(&f, &[&shift], &samples).unwrap() > 1e-2);
    }
}
