//! Sparse Euclidean geometric algebra.
//!
//! Every basis vector squares to +1. Multivectors are immutable values keyed
//! by [`Blade`] bitmasks; products compute their sign from the transposition
//! parity of the concatenated factor lists.

mod blade;
mod multivector;

pub use blade::{Blade, MAX_DIMENSION};
pub use multivector::{Multivector, DEFAULT_TOLERANCE, PRUNE_EPSILON};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge(usize),
    #[error("basis index {0} repeated in blade")]
    RepeatedIndex(usize),
    #[error("expected a grade-1 multivector")]
    NotVector,
    #[error("expected a grade-2 blade, got grade {0}")]
    NotBivector(usize),
    #[error("not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("non-finite coefficient")]
    NonFinite,
}
