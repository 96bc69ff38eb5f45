//! Newton-polyhedron invariants and Fourier restriction exponents for
//! convex polynomial hypersurfaces `x4 = phi(x1, x2, x3)`.
//!
//! The crate computes the Newton distance `d` and height `h` of the graph
//! function, derives the critical restriction exponent
//! `p* = 2(1+h)/(2h+1)` in exact rational arithmetic, and provides the
//! numerical harnesses that probe the surface-measure Fourier decay
//! `|J(xi)| ~ |xi|^{-1/h}` and the sharpness of `p*` through Knapp-type
//! test families.

pub mod adapt;
pub mod fit;
pub mod newton;
pub mod oscint;
pub mod polyalg;
pub mod quad;
pub mod rat;
pub mod report;
pub mod restrict;

pub use polyalg::{LinearChange, Monomial, Polynomial};
pub use rat::Rat;

/// Parses a polynomial in the default three ambient variables.
pub fn parse_poly(text: &str) -> Result<Polynomial, polyalg::ParseError> {
    parse_poly_n(text, 3)
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_poly_n(text: &str, nvars: usize) -> Result<Polynomial, polyalg::ParseError> {
    polyalg::parse(text, nvars)
}
