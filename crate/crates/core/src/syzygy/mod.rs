//! Syzygies of a parametrisation: mu-basis, implicit equation, singularity
//! class and birational inverse.

mod classify;
mod implicit;
mod inverse;
mod mubasis;
mod param;

pub use classify::{classify, coefficient_matrix, Classification, SingularityKind};
pub use implicit::{implicit_equation, perfect_root, ImplicitEquation};
pub use inverse::{check_inverse, inverse_map, InverseMap};
pub use mubasis::{mu_basis, syzygies, MuBasis};
pub use param::{cross, kernel_piece, proportionality, Parametrization};
