//! Exact polynomials and rational functions in `d, e1, ..., e{d0}`.

mod factored;
mod json;
mod linear;
mod poly;
mod split;

pub use factored::{rational_add, FactoredRational};
pub use json::{FactoredJson, PolyJson, TermJson};
pub use linear::{linear_divides, LinearForm};
pub use poly::{rat, ratio, var_name, Monomial, Polynomial, Rational};
pub use split::split_linear;

/// Evaluates `p` at `point` (index 0 is `d`).
pub fn evaluate(p: &Polynomial, point: &[Rational]) -> crate::Result<Rational> {
    p.evaluate(point)
}
