//! Exact Laurent polynomial and rational function arithmetic over the
//! integers, plus the tropical semifield on the frozen variables.

mod poly;
mod rat;

pub use poly::{grlex, poly_gcd, Exponents, LaurentPoly};
pub use rat::{as_coefficient, proportional, trop_add, RatExpr, RatOp, TropMonomial};
