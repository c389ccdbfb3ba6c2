//! Exact rational linear algebra.
//!
//! Everything downstream (Hochschild, cyclic and Poisson homology) is reduced
//! to kernels, images and span membership over `Q`. Arithmetic is exact and all
//! tie-breaking is deterministic so that repeated runs give identical bases.

mod basis;
mod homology;
mod lincomb;
mod matrix;

pub use basis::IndexedBasis;
pub use homology::{HomologyPresentation, SpanSolver};
pub use lincomb::LinComb;
pub use matrix::{Matrix, Rref};

use num::{BigRational, One, Zero};
use thiserror::Error;

/// The ground field.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a complex: d_out * d_in is nonzero in column {column}")]
    NotAComplex { column: usize },
    #[error("vector is not a cycle")]
    NotACycle,
    #[error("vector is not in the span")]
    NotInSpan,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_scaled(acc: &mut [Q], s: &Q, v: &[Q]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += s * x;
        }
    }
}

/// Basis of the kernel of `m`; see [`Matrix::kernel_basis`].
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Q>> {
    m.kernel_basis()
}

/// Coefficients expressing `target` in the span of `vectors`, or `None` when
/// the target is not in the span. Free coefficients are set to zero.
pub fn solve_in_span(vectors: &[Vec<Q>], target: &[Q]) -> Result<Option<Vec<Q>>, LinAlgError> {
    let n = target.len();
    for v in vectors {
        if v.len() != n {
            return Err(LinAlgError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    let k = vectors.len();
    let mut cols = vectors.to_vec();
    cols.push(target.to_vec());
    let Rref { reduced, pivots } = Matrix::from_columns(n, &cols).rref();
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = zero_vec(k);
    for (row, &p) in pivots.iter().enumerate() {
        coeffs[p] = reduced.get(row, k);
    }
    Ok(Some(coeffs))
}
