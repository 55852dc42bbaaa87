use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

/// Metadata written into the CSV header of exported paths.
#[derive(Clone, Debug, PartialEq)]
pub struct PathMeta {
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub init_hash: String,
}

/// Matrix-valued solution sampled on a grid.
#[derive(Clone, Debug)]
pub struct OperatorPath {
    pub t: Vec<f64>,
    pub values: Vec<DMatrix<f64>>,
    pub h: f64,
    pub meta: PathMeta,
}

/// Vector-valued solution `(J, J′)` sampled on a uniform grid from 0.
#[derive(Clone, Debug)]
pub struct JacobiPath {
    pub t: Vec<f64>,
    pub j: Vec<DVector<f64>>,
    pub jp: Vec<DVector<f64>>,
    pub h: f64,
}

impl OperatorPath {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn last(&self) -> &DMatrix<f64> {
        self.values.last().expect("non-empty path")
    }

    /// Largest `‖S − Sᵀ‖` over the grid.
    pub fn symmetry_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|s| (s - s.transpose()).norm())
            .fold(0.0, f64::max)
    }

    /// Value at the node closest to `t`.
    pub fn at(&self, t: f64) -> &DMatrix<f64> {
        let k = self
            .t
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(k, _)| k)
            .expect("non-empty path");
        &self.values[k]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# a={},b={},h={},init={}",
            self.meta.a, self.meta.b, self.meta.h, self.meta.init_hash
        );
        let (r, c) = self.values.first().map(|m| m.shape()).unwrap_or((0, 0));
        out.push('t');
        for i in 1..=r {
            for j in 1..=c {
                let _ = write!(out, ",S_{i}{j}");
            }
        }
        out.push('\n');
        for (t, m) in self.t.iter().zip(&self.values) {
            let _ = write!(out, "{t:e}");
            for i in 0..r {
                for j in 0..c {
                    let _ = write!(out, ",{:e}", m[(i, j)]);
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }
}

impl JacobiPath {
    pub fn end(&self) -> (&DVector<f64>, &DVector<f64>) {
        (
            self.j.last().expect("non-empty"),
            self.jp.last().expect("non-empty"),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# h={}", self.h);
        let n = self.j.first().map(|v| v.len()).unwrap_or(0);
        out.push('t');
        for i in 1..=n {
            let _ = write!(out, ",J_{i}");
        }
        for i in 1..=n {
            let _ = write!(out, ",dJ_{i}");
        }
        out.push('\n');
        for k in 0..self.t.len() {
            let _ = write!(out, "{:e}", self.t[k]);
            for v in self.j[k].iter().chain(self.jp[k].iter()) {
                let _ = write!(out, ",{v:e}");
            }
            out.push('\n');
        }
        out
    }
}
