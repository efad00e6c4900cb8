//! Exact linear algebra over linear forms in the `x_E` and over the rationals.

pub mod charpoly;
pub mod dab;
pub mod linform;
pub mod matrix;
pub mod rational;
pub mod symbolic;

pub use charpoly::{char_poly, integer_char_poly};
pub use dab::dab_double;
pub use linform::{parse_linform, LinForm};
pub use matrix::{build_transition_matrix, SymbolicMatrix};
pub use rational::{format_rational, parse_rational, RationalMatrix, RationalPolynomial, Weights};
pub use symbolic::{linear_product, symbolic_char_poly, MPoly};
