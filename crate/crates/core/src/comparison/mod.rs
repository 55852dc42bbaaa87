//! Riccati and Jacobi comparison along geodesics in pinched negative curvature.

mod decay;
mod jacobi;
mod ode;
mod path;
mod perturbed;
mod profile;
mod pullback;
mod riccati;

use thiserror::Error;

pub use decay::{
    boundary_curvature, decay_sample, transverse_decay_experiment, DecayOptions, DecayReport,
    DecaySample,
};
pub use jacobi::jacobi_solve;
pub use path::{JacobiPath, OperatorPath, PathMeta};
pub use perturbed::{
    frame_jacobi_solve, gronwall_bound, isotropic_curvature, perturbed_jacobi_solve, NablaRForcing,
};
pub use profile::{CurvatureProfile, RiccatiInit};
pub use pullback::{
    covariant_hessian, fd_laplacian, hessian_pullback_defect, PullbackTerms, ScalarField,
};
pub use riccati::{
    comparison_margins, fund_form_envelope, model_shape_operator, model_solution, riccati_solve,
    riccati_solve_with, riccati_via_jacobi, Margins, RiccatiOptions,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComparisonError {
    #[error("invalid initial condition: {0}")]
    InvalidInit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular at t = {t}")]
    Singular { t: f64 },
    #[error("solution escapes to infinity near t = {time}")]
    FiniteEscape { time: f64 },
    #[error("covariant-derivative terms need a derivative bound on the curvature")]
    MissingDerivativeBound,
    #[error("outside the implemented scope: {0}")]
    Unsupported(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
    #[error(transparent)]
    Fit(#[from] crate::fit::FitError),
}
