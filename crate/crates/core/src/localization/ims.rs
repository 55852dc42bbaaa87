use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::grid::{Grid1D, Quadrature};
use super::operator::{energy, mass, FirstOrderOperator, LocalizedOperator};
use super::partition::{make_partition, Cover, PartitionOfUnity};
use super::section::{fd_vectors, Section1D, SectionFn};
use super::LocalizationError;

/// Discretization defect of an identity, as exported in JSON reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub identity: String,
    pub grid_h: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    /// `|defect| / h²`.
    pub constant: f64,
    /// Observed order against the previous, coarser grid.
    pub rate_estimate: Option<f64>,
}

fn check_partition(grid: &Grid1D, part: &PartitionOfUnity) -> Result<(), LocalizationError> {
    if part.psi.iter().any(|p| p.len() != grid.len()) {
        return Err(LocalizationError::Dimension(
            "partition is sampled on a different grid".into(),
        ));
    }
    Ok(())
}

fn product(part: &PartitionOfUnity, v: usize, u: &[DVector<f64>]) -> Vec<DVector<f64>> {
    u.iter().zip(&part.psi[v]).map(|(x, p)| x * *p).collect()
}

/// Both sides of the localization identity
/// `Σ_V (‖∇(ψ_V u)‖² + ⟨B ψ_V u, ψ_V u⟩) = ⟨Au, u⟩ + Σ_V ∫ |∇ψ_V|² |u|²`.
///
/// All derivatives of sampled sections are taken by central differences, so
/// the defect measures the discretization error rather than vanishing.
pub fn ims_identity_defect(
    grid: &Grid1D,
    u: &Section1D,
    part: &PartitionOfUnity,
    op: &LocalizedOperator,
) -> Result<DefectReport, LocalizationError> {
    u.check_grid(grid)?;
    check_partition(grid, part)?;
    u.check_interior()?;
    let lhs: f64 = (0..part.len())
        .map(|v| {
            let w = product(part, v, &u.values);
            energy(grid, op, &w, &fd_vectors(grid, &w))
        })
        .sum();
    let du = fd_vectors(grid, &u.values);
    let grad_mass: Vec<f64> = (0..grid.len())
        .map(|k| part.d1.iter().map(|d| d[k] * d[k]).sum::<f64>() * u.values[k].norm_squared())
        .collect();
    let rhs = energy(grid, op, &u.values, &du) + grid.integrate(&grad_mass);
    let defect = lhs - rhs;
    Ok(DefectReport {
        identity: "ims".into(),
        grid_h: grid.h(),
        lhs,
        rhs,
        defect,
        constant: defect.abs() / (grid.h() * grid.h()),
        rate_estimate: None,
    })
}

/// Repeats [`ims_identity_defect`] on grids with `ns` intervals over `[a, b]`
/// and fills in the observed convergence rates.
pub fn ims_refinement(
    (a, b): (f64, f64),
    ns: &[usize],
    u: &SectionFn,
    cover: &Cover,
    op: &LocalizedOperator,
) -> Result<Vec<DefectReport>, LocalizationError> {
    let mut out: Vec<DefectReport> = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = Grid1D::new(a, b, n, Quadrature::Trapezoid)?;
        let part = make_partition(&grid, cover)?;
        let mut rep = ims_identity_defect(&grid, &Section1D::sample(&grid, u), &part, op)?;
        if let Some(prev) = out.last() {
            rep.rate_estimate =
                Some((prev.defect.abs() / rep.defect.abs()).ln() / (prev.grid_h / rep.grid_h).ln());
        }
        out.push(rep);
    }
    Ok(out)
}

/// Piece chosen by [`best_piece`] with the terms of its Rayleigh bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestPiece {
    pub index: usize,
    pub rayleigh: f64,
    pub rayleigh_u: f64,
    /// `Σ_V sup_{supp u} |∇ψ_V|²`.
    pub gradient_term: f64,
    pub bound: f64,
    pub slack: f64,
}

fn product_derivative(
    part: &PartitionOfUnity,
    v: usize,
    u: &[DVector<f64>],
    du: &[DVector<f64>],
) -> Vec<DVector<f64>> {
    (0..u.len())
        .map(|k| &u[k] * part.d1[v][k] + &du[k] * part.psi[v][k])
        .collect()
}

/// The nonzero piece `ψ_V u` of smallest Rayleigh quotient, checked against
/// `Ray(u) + Σ_V sup_{supp u} |∇ψ_V|²`. Uses exact product-rule derivatives.
pub fn best_piece(
    grid: &Grid1D,
    u: &Section1D,
    part: &PartitionOfUnity,
    op: &LocalizedOperator,
) -> Result<BestPiece, LocalizationError> {
    u.check_grid(grid)?;
    check_partition(grid, part)?;
    let m = mass(grid, &u.values);
    if !(m > 0.0) {
        return Err(LocalizationError::ZeroSection);
    }
    let du = u.derivative(grid);
    let ray_u = energy(grid, op, &u.values, &du) / m;
    let supp = u.support();
    let gradient_term: f64 = (0..part.len())
        .map(|v| part.grad_sup(v, &supp).powi(2))
        .sum();
    let mut best: Option<(usize, f64)> = None;
    for v in 0..part.len() {
        let w = product(part, v, &u.values);
        let mw = mass(grid, &w);
        if mw <= 1e-28 * m {
            continue;
        }
        let r = energy(grid, op, &w, &product_derivative(part, v, &u.values, &du)) / mw;
        if best.is_none_or(|(_, br)| r < br) {
            best = Some((v, r));
        }
    }
    let (index, rayleigh) = best.expect("Σψ² = 1 and u ≠ 0 leave a nonzero piece");
    let bound = ray_u + gradient_term;
    Ok(BestPiece {
        index,
        rayleigh,
        rayleigh_u: ray_u,
        gradient_term,
        bound,
        slack: bound - rayleigh,
    })
}

/// Nodewise comparison of a left side with its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseCheck {
    /// `max_k (lhs_k − rhs_k)`; nonpositive when the bound holds everywhere.
    pub worst_excess: f64,
    pub worst_node: usize,
    pub max_lhs: f64,
    pub max_rhs: f64,
    pub holds: bool,
}

fn pointwise(lhs: &[f64], rhs: &[f64]) -> PointwiseCheck {
    let scale = rhs.iter().chain(lhs).copied().fold(0.0, f64::max);
    let (worst_node, worst_excess) = lhs
        .iter()
        .zip(rhs)
        .map(|(l, r)| l - r)
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    PointwiseCheck {
        worst_excess,
        worst_node,
        max_lhs: lhs.iter().copied().fold(0.0, f64::max),
        max_rhs: rhs.iter().copied().fold(0.0, f64::max),
        holds: worst_excess <= 1e-12 * (1.0 + scale),
    }
}

/// Checks `Σ_V |A(ψ_V u) − λψ_V u|² ≤ 2 Σ_V ‖σ_A‖² sup|∇ψ_V|² |u|² + 2|Au − λu|²` nodewise.
pub fn first_order_defect(
    grid: &Grid1D,
    u: &Section1D,
    lambda: f64,
    part: &PartitionOfUnity,
    op: &FirstOrderOperator,
) -> Result<PointwiseCheck, LocalizationError> {
    u.check_grid(grid)?;
    check_partition(grid, part)?;
    let du = u.derivative(grid);
    let supp = u.support();
    let sig2 = op.symbol_norm().powi(2);
    let grad_sum: f64 = (0..part.len())
        .map(|v| part.grad_sup(v, &supp).powi(2))
        .sum();
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for (k, x) in grid.nodes().enumerate() {
        let au = op.apply(x, &u.values[k], &du[k]) - &u.values[k] * lambda;
        let mut l = 0.0;
        for v in 0..part.len() {
            let w = &u.values[k] * part.psi[v][k];
            let dw = &u.values[k] * part.d1[v][k] + &du[k] * part.psi[v][k];
            l += (op.apply(x, &w, &dw) - w * lambda).norm_squared();
        }
        lhs.push(l);
        rhs.push(2.0 * sig2 * grad_sum * u.values[k].norm_squared() + 2.0 * au.norm_squared());
    }
    Ok(pointwise(&lhs, &rhs))
}

/// Checks the second-order bound
/// `Σ_V |(A−λ)(ψ_V u)|² ≤ 4|(A−λ)u|² + 16 Σ sup|∇ψ_V|² |∇u|² + 4 Σ (sup|Δψ_V|² + ‖σ_B‖² sup|∇ψ_V|²) |u|²`
/// nodewise. Needs second derivatives of `u`.
pub fn second_order_defect(
    grid: &Grid1D,
    u: &Section1D,
    lambda: f64,
    part: &PartitionOfUnity,
    op: &LocalizedOperator,
) -> Result<PointwiseCheck, LocalizationError> {
    u.check_grid(grid)?;
    check_partition(grid, part)?;
    let ddu =
        u.d2.as_ref()
            .ok_or(LocalizationError::MissingSecondDerivatives)?;
    let du = u.derivative(grid);
    let supp = u.support();
    let sig2 = op.symbol_norm().powi(2);
    let g2: f64 = (0..part.len())
        .map(|v| part.grad_sup(v, &supp).powi(2))
        .sum();
    let l2: f64 = (0..part.len())
        .map(|v| part.laplacian_sup(v, &supp).powi(2))
        .sum();
    let mut lhs = Vec::with_capacity(grid.len());
    let mut rhs = Vec::with_capacity(grid.len());
    for (k, x) in grid.nodes().enumerate() {
        let (u0, u1, u2) = (&u.values[k], &du[k], &ddu[k]);
        let au = op.apply(x, u0, u1, u2) - u0 * lambda;
        let mut l = 0.0;
        for v in 0..part.len() {
            let (p, p1, p2) = (part.psi[v][k], part.d1[v][k], part.d2[v][k]);
            let w = u0 * p;
            let dw = u0 * p1 + u1 * p;
            let ddw = u0 * p2 + u1 * (2.0 * p1) + u2 * p;
            l += (op.apply(x, &w, &dw, &ddw) - w * lambda).norm_squared();
        }
        lhs.push(l);
        rhs.push(
            4.0 * au.norm_squared()
                + 16.0 * g2 * u1.norm_squared()
                + 4.0 * (l2 + sig2 * g2) * u0.norm_squared(),
        );
    }
    Ok(pointwise(&lhs, &rhs))
}
