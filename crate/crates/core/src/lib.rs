//! Exact computation with equivariant tree models.

pub mod algebra;
pub mod grouprep;
pub mod ideal;
pub mod io;
pub mod model;
pub mod toric;
pub mod tree;

pub use algebra::{Rational, Scalar};

/// Polynomials with exact scalar coefficients.
pub type Poly = algebra::Polynomial<Scalar>;
/// Polynomials with rational coefficients.
pub type QPoly = algebra::Polynomial<Rational>;
/// Dense matrices of exact scalars.
pub type Mat = algebra::Matrix<Scalar>;
