//! Killing forms, Cartan decompositions and Casimir potentials of
//! finite-dimensional representations.

mod algebra;
mod cartan;
mod potential;
mod rep;
mod symbol;

use thiserror::Error;

pub use algebra::{killing_form, LieAlgebra};
pub use cartan::{cartan_split, CartanSplit};
pub use potential::{
    bracket_identity_defect, casimir_split, commutator_defect, curvature_endomorphism,
    curvature_from_brackets, curvature_summary, isotropy_potential, potential_via_curvature,
    sectional_curvature, wedge_endomorphism, CasimirSplit, CurvatureSummary, PotentialComparison,
};
pub use rep::{
    alpha_star, isotropy_matrix, spin_lift, wedge_derivation, IsotropyKind, RawRepresentation,
    Representation,
};
pub use symbol::{clifford_symbol, covariant_derivative_rule, symbol_compat_check, SymbolReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CasimirError {
    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),
    #[error("not an involutive automorphism: {0}")]
    NotInvolution(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("element does not lie in {0}")]
    NotInSubspace(&'static str),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("σ_0(X_{0}) is not skew-symmetric")]
    NotSkew(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("outside the implemented scope: {0}")]
    Unsupported(String),
}
