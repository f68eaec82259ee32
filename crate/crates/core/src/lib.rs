//! Exact construction of off-shell Bethe vectors for `U_q(gl_N)` on tensor
//! products of evaluation vector representations, by the nested trace formula
//! and by the current-projection recurrence, plus the machinery to check that
//! the two agree.

pub mod error;
pub mod evaluation;
pub mod gauss;
pub mod multiset;
pub mod projection;
pub mod rmatrix;
pub mod scalar;
pub mod tensor;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;
