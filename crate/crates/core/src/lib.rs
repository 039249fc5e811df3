pub mod adjoint;
pub mod bipoly;
pub mod error;
pub mod exactmath;
pub mod mu2mild;
pub mod mu2sing;
pub mod oracle;
pub mod report;
pub mod sample;
pub mod syzygy;

pub use error::{ReesError, Result};
