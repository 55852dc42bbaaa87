//! Spectrum bottoms of radially reduced Laplacians on model surface ends.

mod bottom;
mod sturm;
mod warped;
mod weyl;

use thiserror::Error;

pub use bottom::{
    ess_bottom, extrapolate, surface_experiment, Comparison, EssParams, SpectrumReport,
    SurfaceDescriptor, SurfaceReport, Verdict,
};
pub use sturm::{gershgorin, sturm_count, tridiagonal_eigenvalue};
pub use warped::{eigen_bottom, radial_reduce, EndKind, Schrodinger1D, WarpedEnd, MIN_NODES};
pub use weyl::{weyl_sequence, WeylReport, DEFAULT_WIDTHS};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("potential is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("warp vanishes or overflows at t = {t}")]
    Degenerate { t: f64 },
    #[error("unknown end type `{0}`")]
    UnknownEnd(String),
    #[error("invalid sequence: {0}")]
    Sequence(String),
    #[error(transparent)]
    Table(#[from] crate::tables::TableError),
}
