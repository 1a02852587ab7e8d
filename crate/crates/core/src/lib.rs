// Negated float comparisons are used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extrapolate;
pub mod geometry;
pub mod quadrature;
pub mod signals;
pub mod spacetime;

pub use error::{Error, ErrorKind, Result};
pub mod propagator;
pub mod wavelet;
pub mod channel;
pub mod verify;
