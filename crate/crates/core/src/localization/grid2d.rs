use std::sync::Arc;

use super::grid::Grid1D;
use super::ims::DefectReport;
use super::partition::{make_partition, Cover};
use super::LocalizationError;

type Field2 = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Scalar Schrödinger operator `−Δ + V` on a rectangle with the flat metric.
#[derive(Clone)]
pub struct Schrodinger2D {
    pub potential: Arc<Field2>,
}

impl Schrodinger2D {
    pub fn new(v: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Schrodinger2D {
            potential: Arc::new(v),
        }
    }
}

/// Tensor-product partition `ψ_i(x) φ_j(y)` and the localization identity
/// on a rectangle, with central-difference gradients.
pub fn ims_identity_defect_2d(
    gx: &Grid1D,
    gy: &Grid1D,
    cover_x: &Cover,
    cover_y: &Cover,
    u: &dyn Fn(f64, f64) -> f64,
    op: &Schrodinger2D,
) -> Result<DefectReport, LocalizationError> {
    let px = make_partition(gx, cover_x)?;
    let py = make_partition(gy, cover_y)?;
    let (nx, ny) = (gx.len(), gy.len());
    let xs: Vec<f64> = gx.nodes().collect();
    let ys: Vec<f64> = gy.nodes().collect();
    let uv: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| ys.iter().map(|&y| u(x, y)).collect())
        .collect();
    let scale = uv.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = |i: usize, j: usize| i < 2 || j < 2 || i + 2 >= nx || j + 2 >= ny;
    for i in 0..nx {
        for j in 0..ny {
            if edge(i, j) && uv[i][j].abs() > 1e-12 * scale {
                return Err(LocalizationError::BoundaryContact);
            }
        }
    }
    let integrate = |f: &dyn Fn(usize, usize) -> f64| -> f64 {
        let mut s = 0.0;
        for (i, wx) in gx.weights().iter().enumerate() {
            for (j, wy) in gy.weights().iter().enumerate() {
                s += wx * wy * f(i, j);
            }
        }
        s
    };
    let form = |w: &Vec<Vec<f64>>| -> f64 {
        let dx: Vec<Vec<f64>> = (0..ny)
            .map(|j| gx.differentiate(&(0..nx).map(|i| w[i][j]).collect::<Vec<_>>()))
            .collect();
        let dy: Vec<Vec<f64>> = (0..nx).map(|i| gy.differentiate(&w[i])).collect();
        integrate(&|i, j| {
            dx[j][i].powi(2) + dy[i][j].powi(2) + (op.potential)(xs[i], ys[j]) * w[i][j].powi(2)
        })
    };
    let mut lhs = 0.0;
    for a in 0..px.len() {
        for b in 0..py.len() {
            let w: Vec<Vec<f64>> = (0..nx)
                .map(|i| {
                    (0..ny)
                        .map(|j| px.psi[a][i] * py.psi[b][j] * uv[i][j])
                        .collect()
                })
                .collect();
            lhs += form(&w);
        }
    }
    // Σ_ij |∇(ψ_i φ_j)|² = Σ_i ψ_i′² + Σ_j φ_j′² since Σψ² = Σφ² = 1.
    let grad2 = |i: usize, j: usize| {
        px.d1.iter().map(|d| d[i] * d[i]).sum::<f64>()
            + py.d1.iter().map(|d| d[j] * d[j]).sum::<f64>()
    };
    let rhs = form(&uv) + integrate(&|i, j| grad2(i, j) * uv[i][j].powi(2));
    let h = gx.h().max(gy.h());
    let defect = lhs - rhs;
    Ok(DefectReport {
        identity: "ims_2d".into(),
        grid_h: h,
        lhs,
        rhs,
        defect,
        constant: defect.abs() / (h * h),
        rate_estimate: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::Quadrature;

    fn bump(x: f64, y: f64) -> f64 {
        let r2 = ((x - 4.0).powi(2) + (y - 3.6).powi(2)) / 9.0;
        if r2 >= 1.0 {
            0.0
        } else {
            (1.0 - r2).powi(4)
        }
    }

    #[test]
    fn tensor_identity_converges() {
        let cover = Cover::new(vec![(0.0, 4.5), (3.5, 8.0)], 1.5);
        let op = Schrodinger2D::new(|x, y| 0.1 * x * y);
        let run = |n: usize| {
            let g = Grid1D::new(0.0, 8.0, n, Quadrature::Trapezoid).unwrap();
            ims_identity_defect_2d(&g, &g, &cover, &cover, &bump, &op).unwrap()
        };
        let (c, f) = (run(200), run(400));
        let rate = (c.defect.abs() / f.defect.abs()).log2();
        assert!((rate - 2.0).abs() < 0.3, "rate {rate}");
        assert!((f.defect / f.lhs).abs() < 1e-2);
    }
}
