use std::sync::Arc;

use nalgebra::DVector;

use super::grid::Grid1D;
use super::LocalizationError;

type JetFn = dyn Fn(f64) -> [DVector<f64>; 3] + Send + Sync;

/// A smooth section of the trivial bundle `ℝ^k` given with two derivatives.
#[derive(Clone)]
pub struct SectionFn {
    fiber: usize,
    jet: Arc<JetFn>,
}

impl SectionFn {
    pub fn new(
        fiber: usize,
        jet: impl Fn(f64) -> [DVector<f64>; 3] + Send + Sync + 'static,
    ) -> Self {
        SectionFn {
            fiber,
            jet: Arc::new(jet),
        }
    }

    /// Scalar section from `x ↦ (u, u′, u″)`.
    pub fn scalar(f: impl Fn(f64) -> (f64, f64, f64) + Send + Sync + 'static) -> Self {
        SectionFn::new(1, move |x| {
            let (u, d, dd) = f(x);
            [
                DVector::from_element(1, u),
                DVector::from_element(1, d),
                DVector::from_element(1, dd),
            ]
        })
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn eval(&self, x: f64) -> [DVector<f64>; 3] {
        (self.jet)(x)
    }
}

/// `cos⁴(π(x − c)/w)` on `|x − c| < w/2`, zero elsewhere; C² across the edges.
pub fn cos4_bump(center: f64, width: f64) -> SectionFn {
    SectionFn::scalar(move |x| {
        let s = std::f64::consts::PI * (x - center) / width;
        if s.abs() >= std::f64::consts::FRAC_PI_2 {
            return (0.0, 0.0, 0.0);
        }
        let k = std::f64::consts::PI / width;
        let (sn, cs) = s.sin_cos();
        let c2 = cs * cs;
        (
            c2 * c2,
            -4.0 * k * c2 * cs * sn,
            k * k * (12.0 * c2 * sn * sn - 4.0 * c2 * c2),
        )
    })
}

/// Samples of a section with optional derivative data on a grid.
#[derive(Clone, Debug)]
pub struct Section1D {
    pub values: Vec<DVector<f64>>,
    pub d1: Option<Vec<DVector<f64>>>,
    pub d2: Option<Vec<DVector<f64>>>,
}

impl Section1D {
    pub fn sample(grid: &Grid1D, f: &SectionFn) -> Self {
        let jets: Vec<[DVector<f64>; 3]> = grid.nodes().map(|x| f.eval(x)).collect();
        Section1D {
            values: jets.iter().map(|j| j[0].clone()).collect(),
            d1: Some(jets.iter().map(|j| j[1].clone()).collect()),
            d2: Some(jets.iter().map(|j| j[2].clone()).collect()),
        }
    }

    /// Values only; derivatives are taken by finite differences when needed.
    pub fn from_values(values: Vec<DVector<f64>>) -> Self {
        Section1D {
            values,
            d1: None,
            d2: None,
        }
    }

    pub fn fiber(&self) -> usize {
        self.values.first().map(|v| v.len()).unwrap_or(0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let sc = |v: &Vec<DVector<f64>>| v.iter().map(|x| x * c).collect::<Vec<_>>();
        Section1D {
            values: sc(&self.values),
            d1: self.d1.as_ref().map(sc),
            d2: self.d2.as_ref().map(sc),
        }
    }

    pub fn check_grid(&self, grid: &Grid1D) -> Result<(), LocalizationError> {
        if self.values.len() != grid.len() {
            return Err(LocalizationError::Dimension(format!(
                "section has {} samples, grid has {} nodes",
                self.values.len(),
                grid.len()
            )));
        }
        Ok(())
    }

    /// First derivative: supplied data or finite differences per component.
    pub fn derivative(&self, grid: &Grid1D) -> Vec<DVector<f64>> {
        if let Some(d) = &self.d1 {
            return d.clone();
        }
        fd_vectors(grid, &self.values)
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Node mask of the numerical support.
    pub fn support(&self) -> Vec<bool> {
        let tol = 1e-14 * self.max_norm();
        self.values.iter().map(|v| v.norm() > tol).collect()
    }

    /// Errors unless the section vanishes on the two outermost nodes at each end.
    pub fn check_interior(&self) -> Result<(), LocalizationError> {
        let n = self.values.len();
        let tol = 1e-12 * self.max_norm();
        let edge = [0, 1, n - 2, n - 1];
        if edge.iter().any(|&k| self.values[k].norm() > tol) {
            return Err(LocalizationError::BoundaryContact);
        }
        Ok(())
    }
}

pub(crate) fn fd_vectors(grid: &Grid1D, values: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let k = values.first().map(|v| v.len()).unwrap_or(0);
    let mut out = vec![DVector::zeros(k); values.len()];
    for c in 0..k {
        let comp: Vec<f64> = values.iter().map(|v| v[c]).collect();
        for (o, d) in out.iter_mut().zip(grid.differentiate(&comp)) {
            o[c] = d;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::Quadrature;

    #[test]
    fn bump_jet_is_consistent() {
        let b = cos4_bump(0.3, 1.2);
        let h = 1e-5;
        for x in [0.0, 0.2, 0.5, 0.8] {
            let [u, d, dd] = b.eval(x);
            let up = b.eval(x + h)[0][0];
            let um = b.eval(x - h)[0][0];
            assert!(((up - um) / (2.0 * h) - d[0]).abs() < 1e-8);
            assert!(((up - 2.0 * u[0] + um) / (h * h) - dd[0]).abs() < 1e-4);
        }
    }

    #[test]
    fn boundary_contact_detected() {
        let g = Grid1D::new(0.0, 1.0, 100, Quadrature::Trapezoid).unwrap();
        assert!(Section1D::sample(&g, &cos4_bump(0.5, 0.5))
            .check_interior()
            .is_ok());
        assert!(Section1D::sample(&g, &cos4_bump(0.0, 0.5))
            .check_interior()
            .is_err());
    }
}
