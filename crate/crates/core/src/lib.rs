//! Numerical laboratory for spectral geometry on hyperbolic surfaces and
//! their model ends.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casimir;
pub mod comparison;
pub mod fit;
pub mod geom;
pub mod localization;
pub mod mollifier;
pub mod spectral;
pub mod tables;
