//! Geometry of the hyperbolic plane in the upper half-plane model.

mod convex;
mod group;
mod isometry;
mod point;

use thiserror::Error;

pub use convex::{convex_hull_ideal, geodesic_frame, project_convex, ConvexBody, Projection};
pub use group::{
    boundary_angle, ideal_from_angle, limit_set_sample, limit_set_sample_with, thin_part_margin,
    GroupPresentation, LimitSetOptions, ThinMembership,
};
pub use isometry::{FixedPoints, Isometry, IsometryClass, PARABOLIC_TOL};
pub use point::{
    distance, exp_map, geodesic_point, log_map, unit_away_from, Ideal, Point, Tangent,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: f64 },
    #[error("empty generator list")]
    Empty,
    #[error("need at least 2 distinct ideal points, got {0}")]
    TooFewPoints(usize),
    #[error("outside the implemented scope: {0}")]
    Unsupported(String),
}
