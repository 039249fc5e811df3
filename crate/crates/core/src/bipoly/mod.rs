//! Bigraded polynomials in `T0, T1` (degree i) and `X0, X1, X2` (degree j).

mod monomial;
mod poly;
mod resultant;
mod tpoly;

pub use monomial::{bidegree_count, monomials, t_monomials, x_count, x_monomials, Monomial};
pub use poly::{BiPoly, XPoly};
pub use resultant::{det_poly, resultant_t};
pub use tpoly::TPoly;
