//! Reduced Hochschild chains and cochains with their calculus operations.

mod chains;
mod cochains;
mod frobenius;

pub use chains::*;
pub use cochains::*;
pub use frobenius::*;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::linalg::LinAlgError;
use crate::mixed::MixedError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HochError {
    #[error("window too small: weight {needed} needed, cutoff is {cutoff}")]
    WindowTooSmall { needed: u32, cutoff: u32 },
    #[error("coefficient mode mismatch: {0}")]
    ModeMismatch(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Mixed(#[from] MixedError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

impl HochError {
    pub(crate) fn from_algebra(e: AlgebraError) -> Self {
        match e {
            AlgebraError::OutOfWindow { needed, cutoff } => HochError::WindowTooSmall { needed, cutoff },
            other => HochError::Algebra(other),
        }
    }
}
