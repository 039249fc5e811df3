//! Exact scalars and linear algebra over Q and prime fields.

mod bareiss;
pub mod elim;
mod matrix;
mod ops;
mod scalar;

pub use elim::{Echelon, Rref};
pub use matrix::ExactMatrix;
pub use ops::{FieldOps, PrimeOps, RationalOps};
pub use scalar::{is_prime_u64, Field, Scalar, DEFAULT_PRIME};
