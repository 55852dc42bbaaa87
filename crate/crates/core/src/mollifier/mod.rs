//! Frame-averaged smoothing of distance functions on the model planes and
//! smooth convex approximations of convex bodies.

mod model;
mod papa;
mod smooth;
mod target;

use thiserror::Error;

pub use model::{Frame, Model, MAX_DISK_KAPPA};
pub use papa::{
    papa_pipeline, polyline_curvature, shape_envelope, LevelCurve, PapaParams, PapaReport,
};
pub use smooth::{bump_profile, check_bounds, BoundCheck, Mollifier, MollifierConfig};
pub use target::{Affine, BodyDistance, Constant, DiskDistance, Regularity, TargetFn};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MollifierError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("smoothing radius {kappa} exceeds the chart limit {limit}")]
    ChartScale { kappa: f64, limit: f64 },
    #[error("point ({x}, {y}) lies outside the chart")]
    OutsideChart { x: f64, y: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("level {level} is not a regular value of the smoothed function")]
    NotRegular { level: f64 },
    #[error("root finding failed: {0}")]
    Root(String),
}
