//! Exact arithmetic on ℝ/ℤ and the decision procedures built on it.

pub mod angle;
pub mod basis;
pub mod contfrac;
pub mod lattice;
pub mod rotation_number;

pub use angle::{angle_add, angle_scale, as_fraction, is_rational, parse_rational, AngleValue, AnonValue, LinearForm, Symbol};
pub use basis::IrrationalBasis;
pub use lattice::{decide_circle, decide_torus2, solve_affine_lattice, solve_with_sign, DEFAULT_TORUS2_BOUND};
pub use rotation_number::estimate_rotation_number;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("integer out of range: {0}")]
    Overflow(String),
}
