use serde::{Deserialize, Serialize};

use super::LocalizationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    Trapezoid,
    Simpson,
}

/// Uniform grid `x_k = a + k h` on `[a, b]`, `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
    weights: Vec<f64>,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize, rule: Quadrature) -> Result<Self, LocalizationError> {
        if !(a < b) || !a.is_finite() || !b.is_finite() || n < 2 {
            return Err(LocalizationError::InvalidGrid(format!(
                "[{a}, {b}] with {n} intervals"
            )));
        }
        if rule == Quadrature::Simpson && n % 2 != 0 {
            return Err(LocalizationError::InvalidGrid(
                "Simpson's rule needs an even number of intervals".into(),
            ));
        }
        let h = (b - a) / n as f64;
        let weights = (0..=n)
            .map(|k| match rule {
                Quadrature::Trapezoid if k == 0 || k == n => h / 2.0,
                Quadrature::Trapezoid => h,
                Quadrature::Simpson if k == 0 || k == n => h / 3.0,
                Quadrature::Simpson if k % 2 == 1 => 4.0 * h / 3.0,
                Quadrature::Simpson => 2.0 * h / 3.0,
            })
            .collect();
        Ok(Grid1D {
            a,
            b,
            n,
            h,
            weights,
        })
    }

    /// Grid with spacing as close to `h` as the interval allows (trapezoid rule).
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self, LocalizationError> {
        let n = ((b - a) / h).round().max(2.0) as usize;
        Grid1D::new(a, b, n, Quadrature::Trapezoid)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.n {
            self.b
        } else {
            self.a + k as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(|k| self.node(k))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Central differences inside, one-sided second-order at the ends.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n;
        let h = self.h;
        (0..=n)
            .map(|k| {
                if k == 0 {
                    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
                } else if k == n {
                    (3.0 * values[n] - 4.0 * values[n - 1] + values[n - 2]) / (2.0 * h)
                } else {
                    (values[k + 1] - values[k - 1]) / (2.0 * h)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_length() {
        for rule in [Quadrature::Trapezoid, Quadrature::Simpson] {
            let g = Grid1D::new(-1.0, 2.0, 30, rule).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - 3.0).abs() < 1e-13);
        }
        assert!(Grid1D::new(0.0, 1.0, 3, Quadrature::Simpson).is_err());
        assert!(Grid1D::new(1.0, 0.0, 4, Quadrature::Trapezoid).is_err());
    }

    #[test]
    fn simpson_integrates_cubics() {
        let g = Grid1D::new(0.0, 1.0, 10, Quadrature::Simpson).unwrap();
        let v: Vec<f64> = g.nodes().map(|x| x * x * x).collect();
        assert!((g.integrate(&v) - 0.25).abs() < 1e-15);
    }
}
