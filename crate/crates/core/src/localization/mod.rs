//! Partitions of unity and localization identities on model domains.

mod cutoff;
mod grid;
mod grid2d;
mod ims;
mod operator;
mod partition;
mod section;

use thiserror::Error;

pub use cutoff::{cutoff_decay_profile, level_set_points, CutoffSample};
pub use grid::{Grid1D, Quadrature};
pub use grid2d::{ims_identity_defect_2d, Schrodinger2D};
pub use ims::{
    best_piece, first_order_defect, ims_identity_defect, ims_refinement, second_order_defect,
    BestPiece, DefectReport, PointwiseCheck,
};
pub use operator::{
    discrete_form_minimum, moving_window_rayleigh, operator_lower_bound, rayleigh,
    FirstOrderOperator, LocalizedOperator,
};
pub use partition::{make_partition, smoothstep, Cover, PartitionOfUnity};
pub use section::{cos4_bump, Section1D, SectionFn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalizationError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("cover leaves the node x = {x} uncovered")]
    Gap { x: f64 },
    #[error("section does not vanish near the grid boundary")]
    BoundaryContact,
    #[error("section vanishes identically")]
    ZeroSection,
    #[error("second derivatives of the section are required")]
    MissingSecondDerivatives,
    #[error("radii must be positive and strictly increasing")]
    NotIncreasing,
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("outside the implemented scope: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
}
