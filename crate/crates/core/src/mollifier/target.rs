use num_complex::Complex64;

use super::model::{mobius_to_origin, Model};
use super::MollifierError;
use crate::geom::{project_convex, ConvexBody, Point};

/// Scalar function on a model chart with its coordinate gradient
/// `∂f/∂x + i ∂f/∂y`.
pub trait TargetFn: Sync {
    fn value(&self, z: Complex64) -> f64;
    fn gradient(&self, z: Complex64) -> Complex64;
}

impl<F: TargetFn + ?Sized> TargetFn for &F {
    fn value(&self, z: Complex64) -> f64 {
        (**self).value(z)
    }
    fn gradient(&self, z: Complex64) -> Complex64 {
        (**self).gradient(z)
    }
}

/// Lipschitz constant `ℓ` of `f` and bound `β` on `|∇²f|` over the region of interest.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Regularity {
    pub ell: f64,
    pub beta: f64,
}

/// Constant function.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl TargetFn for Constant {
    fn value(&self, _: Complex64) -> f64 {
        self.0
    }
    fn gradient(&self, _: Complex64) -> Complex64 {
        Complex64::default()
    }
}

/// `a·x + b·y + c` in chart coordinates.
#[derive(Clone, Copy, Debug)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TargetFn for Affine {
    fn value(&self, z: Complex64) -> f64 {
        self.a * z.re + self.b * z.im + self.c
    }
    fn gradient(&self, _: Complex64) -> Complex64 {
        Complex64::new(self.a, self.b)
    }
}

/// Distance to a closed metric disk, zero inside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskDistance {
    pub model: Model,
    pub center: Complex64,
    pub radius: f64,
}

impl DiskDistance {
    pub fn new(model: Model, center: Complex64, radius: f64) -> Result<Self, MollifierError> {
        model.check_point(center)?;
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(MollifierError::InvalidConfig(format!(
                "disk radius {radius} must be positive"
            )));
        }
        Ok(DiskDistance {
            model,
            center,
            radius,
        })
    }

    /// Geodesic curvature of the boundary circle.
    pub fn boundary_curvature(&self) -> f64 {
        match self.model {
            Model::Euclidean => 1.0 / self.radius,
            Model::Hyperbolic => 1.0 / self.radius.tanh(),
        }
    }

    /// Signed distance to the boundary circle, smooth away from the center.
    pub fn signed(&self, z: Complex64) -> f64 {
        self.model.distance(z, self.center) - self.radius
    }

    fn signed_gradient(&self, z: Complex64) -> Complex64 {
        match self.model {
            Model::Euclidean => {
                let d = z - self.center;
                let n = d.norm();
                if n == 0.0 {
                    Complex64::default()
                } else {
                    d / n
                }
            }
            Model::Hyperbolic => {
                // d = 2 atanh|M(z)| with M the disk isometry sending the center to 0
                let m = mobius_to_origin(self.center, z);
                let r = m.norm();
                if r == 0.0 {
                    return Complex64::default();
                }
                let one = Complex64::new(1.0, 0.0);
                let dm = (1.0 - self.center.norm_sqr())
                    / ((one - self.center.conj() * z) * (one - self.center.conj() * z));
                let outer = m / r * (2.0 / (1.0 - r * r));
                outer * dm.conj()
            }
        }
    }
}

impl TargetFn for DiskDistance {
    fn value(&self, z: Complex64) -> f64 {
        self.signed(z).max(0.0)
    }
    fn gradient(&self, z: Complex64) -> Complex64 {
        if self.signed(z) <= 0.0 {
            Complex64::default()
        } else {
            self.signed_gradient(z)
        }
    }
}

/// Distance to a convex body of the upper half-plane, read in the disk
/// chart through `w = i(1 + z)/(1 − z)`, minus `offset`.
#[derive(Clone, Debug)]
pub struct BodyDistance {
    pub body: ConvexBody,
    pub offset: f64,
}

fn to_half_plane(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    Complex64::i() * (one + z) / (one - z)
}

impl BodyDistance {
    fn project(&self, z: Complex64) -> Option<(f64, Complex64)> {
        let w = to_half_plane(z);
        let p = Point::new(w.re, w.im).ok()?;
        let proj = project_convex(&self.body, &p).ok()?;
        let grad = match proj.grad {
            Some(t) => {
                // unit Riemannian gradient to the coordinate gradient of the half-plane,
                // then back through the holomorphic chart change
                let g = Complex64::new(t.dx, t.dy) / (w.im * w.im);
                let one = Complex64::new(1.0, 0.0);
                let dw = Complex64::new(0.0, 2.0) / ((one - z) * (one - z));
                g * dw.conj()
            }
            None => Complex64::default(),
        };
        Some((proj.dist, grad))
    }
}

impl TargetFn for BodyDistance {
    fn value(&self, z: Complex64) -> f64 {
        self.project(z)
            .map_or(f64::NAN, |(d, _)| (d - self.offset).max(0.0))
    }
    fn gradient(&self, z: Complex64) -> Complex64 {
        match self.project(z) {
            Some((d, g)) if d > self.offset => g,
            Some(_) => Complex64::default(),
            None => Complex64::new(f64::NAN, f64::NAN),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Ideal;

    fn fd_gradient(f: &dyn TargetFn, z: Complex64) -> Complex64 {
        let h = 1e-6;
        let dx = (f.value(z + h) - f.value(z - h)) / (2.0 * h);
        let hy = Complex64::new(0.0, h);
        let dy = (f.value(z + hy) - f.value(z - hy)) / (2.0 * h);
        Complex64::new(dx, dy)
    }

    #[test]
    fn disk_gradients_match_differences() {
        for model in [Model::Euclidean, Model::Hyperbolic] {
            let f = DiskDistance::new(model, Complex64::new(0.1, -0.2), 0.3).unwrap();
            for z in [
                Complex64::new(0.7, 0.1),
                Complex64::new(-0.5, 0.5),
                Complex64::new(0.2, -0.85),
            ] {
                assert!(
                    (fd_gradient(&f, z) - f.gradient(z)).norm()
                        < 1e-6 * f.gradient(z).norm().max(1.0)
                );
                // unit Riemannian gradient
                let g = f.gradient(z).norm() / model.conformal_factor(z);
                assert!((g - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn body_distance_agrees_with_disk() {
        // the disk of radius 1 about the chart origin is the half-plane disk about i
        let body = ConvexBody::Disk {
            center: Point::I,
            radius: 1.0,
        };
        let b = BodyDistance { body, offset: 0.0 };
        let d = DiskDistance::new(Model::Hyperbolic, Complex64::default(), 1.0).unwrap();
        for z in [
            Complex64::new(0.7, 0.1),
            Complex64::new(-0.5, 0.6),
            Complex64::new(0.0, -0.9),
        ] {
            assert!((b.value(z) - d.value(z)).abs() < 1e-10);
            assert!((b.gradient(z) - d.gradient(z)).norm() < 1e-8 * d.gradient(z).norm());
        }
        let seg = BodyDistance {
            body: ConvexBody::Geodesic {
                ends: [Ideal::Real(-1.0), Ideal::Real(1.0)],
            },
            offset: 0.2,
        };
        let z = Complex64::new(0.3, 0.55);
        assert!((fd_gradient(&seg, z) - seg.gradient(z)).norm() < 1e-5 * seg.gradient(z).norm());
    }
}
