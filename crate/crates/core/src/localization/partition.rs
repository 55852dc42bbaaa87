use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use super::LocalizationError;

/// Quintic smoothstep `6t⁵ − 15t⁴ + 10t³` clamped to `[0, 1]`, with two derivatives.
pub fn smoothstep(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0, 0.0)
    } else if t >= 1.0 {
        (1.0, 0.0, 0.0)
    } else {
        let t2 = t * t;
        (
            t2 * t * (10.0 - 15.0 * t + 6.0 * t2),
            30.0 * t2 * (1.0 - t).powi(2),
            60.0 * t * (1.0 - t) * (1.0 - 2.0 * t),
        )
    }
}

/// Open cover of an interval by subintervals and the ramp width of the bumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub intervals: Vec<(f64, f64)>,
    pub width: f64,
}

impl Cover {
    pub fn new(intervals: Vec<(f64, f64)>, width: f64) -> Self {
        Cover { intervals, width }
    }
}

/// Family `ψ_V` with `Σ ψ_V² = 1`, sampled with exact derivatives.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity {
    pub psi: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
    pub cover: Cover,
}

/// Unnormalized bump of one cover element: rises over `width` inside each
/// end that lies within the domain, flat where the element reaches the edge.
fn eta(x: f64, (l, r): (f64, f64), width: f64, (a, b): (f64, f64)) -> (f64, f64, f64) {
    let left = if l <= a {
        (1.0, 0.0, 0.0)
    } else {
        smoothstep((x - l) / width)
    };
    let right = if r >= b {
        (1.0, 0.0, 0.0)
    } else {
        smoothstep((r - x) / width)
    };
    let (fl, dl, ddl) = (left.0, left.1 / width, left.2 / (width * width));
    let (fr, dr, ddr) = (right.0, -right.1 / width, right.2 / (width * width));
    (
        fl * fr,
        dl * fr + fl * dr,
        ddl * fr + 2.0 * dl * dr + fl * ddr,
    )
}

/// Builds `ψ_V = η_V / √(Σ η²)` for the cover on the grid.
pub fn make_partition(grid: &Grid1D, cover: &Cover) -> Result<PartitionOfUnity, LocalizationError> {
    if cover.intervals.is_empty() {
        return Err(LocalizationError::InvalidCover("empty cover".into()));
    }
    if !(cover.width > 0.0) {
        return Err(LocalizationError::InvalidCover(format!(
            "ramp width {} must be positive",
            cover.width
        )));
    }
    for &(l, r) in &cover.intervals {
        if !(r - l > 2.0 * cover.width) {
            return Err(LocalizationError::InvalidCover(format!(
                "element ({l}, {r}) is shorter than two ramp widths"
            )));
        }
    }
    let dom = grid.bounds();
    let m = cover.intervals.len();
    let nodes = grid.len();
    let mut psi = vec![vec![0.0; nodes]; m];
    let mut d1 = vec![vec![0.0; nodes]; m];
    let mut d2 = vec![vec![0.0; nodes]; m];
    for (k, x) in grid.nodes().enumerate() {
        let etas: Vec<(f64, f64, f64)> = cover
            .intervals
            .iter()
            .map(|&iv| eta(x, iv, cover.width, dom))
            .collect();
        let n0: f64 = etas.iter().map(|e| e.0 * e.0).sum();
        if n0 <= 1e-300 {
            return Err(LocalizationError::Gap { x });
        }
        let n1: f64 = etas.iter().map(|e| 2.0 * e.0 * e.1).sum();
        let n2: f64 = etas.iter().map(|e| 2.0 * (e.1 * e.1 + e.0 * e.2)).sum();
        let s = n0.sqrt();
        for (v, e) in etas.iter().enumerate() {
            psi[v][k] = e.0 / s;
            d1[v][k] = e.1 / s - 0.5 * e.0 * n1 / (s * n0);
            d2[v][k] = e.2 / s - e.1 * n1 / (s * n0) + 0.75 * e.0 * n1 * n1 / (s * n0 * n0)
                - 0.5 * e.0 * n2 / (s * n0);
        }
    }
    Ok(PartitionOfUnity {
        psi,
        d1,
        d2,
        cover: cover.clone(),
    })
}

impl PartitionOfUnity {
    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// `max_k |Σ ψ_V² − 1|`.
    pub fn closure_defect(&self) -> f64 {
        let n = self.psi[0].len();
        (0..n)
            .map(|k| (self.psi.iter().map(|p| p[k] * p[k]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max_k |Σ ψ_V ψ_V′|`.
    pub fn cross_term_defect(&self) -> f64 {
        let n = self.psi[0].len();
        (0..n)
            .map(|k| {
                self.psi
                    .iter()
                    .zip(&self.d1)
                    .map(|(p, d)| p[k] * d[k])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    /// `sup |ψ_V′|` over the nodes where `mask` holds.
    pub fn grad_sup(&self, v: usize, mask: &[bool]) -> f64 {
        self.d1[v]
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(d, _)| d.abs())
            .fold(0.0, f64::max)
    }

    /// `sup |ψ_V″|` over the nodes where `mask` holds.
    pub fn laplacian_sup(&self, v: usize, mask: &[bool]) -> f64 {
        self.d2[v]
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(d, _)| d.abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::Quadrature;

    fn grid() -> Grid1D {
        Grid1D::new(0.0, 1.0, 1000, Quadrature::Trapezoid).unwrap()
    }

    #[test]
    fn single_element_is_constant() {
        let p = make_partition(&grid(), &Cover::new(vec![(-1.0, 2.0)], 0.1)).unwrap();
        assert!(p.psi[0].iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!(p.d1[0].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_elements_close_up() {
        let p = make_partition(&grid(), &Cover::new(vec![(0.0, 0.6), (0.4, 1.0)], 0.1)).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.closure_defect() < 1e-14);
        assert!(p.cross_term_defect() < 1e-12);
    }

    #[test]
    fn gap_is_reported() {
        match make_partition(&grid(), &Cover::new(vec![(0.0, 0.4), (0.6, 1.0)], 0.1)) {
            Err(LocalizationError::Gap { x }) => assert!(x >= 0.4 && x <= 0.6),
            other => panic!("expected gap, got {other:?}"),
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let g = Grid1D::new(0.0, 1.0, 4000, Quadrature::Trapezoid).unwrap();
        let p = make_partition(
            &g,
            &Cover::new(vec![(0.0, 0.55), (0.35, 0.8), (0.6, 1.0)], 0.15),
        )
        .unwrap();
        for v in 0..p.len() {
            let fd = g.differentiate(&p.psi[v]);
            for k in 1..g.len() - 1 {
                assert!(
                    (fd[k] - p.d1[v][k]).abs() < 1e-3 * (1.0 + p.d1[v][k].abs()),
                    "v={v} k={k}"
                );
            }
            // the third derivative jumps at ramp ends, so differences are only O(h) there
            let fd2 = g.differentiate(&p.d1[v]);
            let scale = p.d2[v].iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for k in 1..g.len() - 1 {
                assert!((fd2[k] - p.d2[v][k]).abs() < 1e-2 * scale, "v={v} k={k}");
            }
        }
    }

    #[test]
    fn smoothstep_endpoints() {
        assert_eq!(smoothstep(0.0), (0.0, 0.0, 0.0));
        assert_eq!(smoothstep(1.0), (1.0, 0.0, 0.0));
        let (v, d, _) = smoothstep(0.5);
        assert!((v - 0.5).abs() < 1e-15 && (d - 1.875).abs() < 1e-14);
    }
}
