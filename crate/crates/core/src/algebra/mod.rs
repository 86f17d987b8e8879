//! Exact scalars, sparse polynomials and the linear algebra built on them.

pub mod cyclotomic;
pub mod matrix;
pub mod minors;
pub mod modular;
pub mod polynomial;
pub mod rational;
pub mod span;
pub mod sparse;
pub mod text;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

pub use cyclotomic::Scalar;
pub use matrix::Matrix;
pub use polynomial::{Label, Monomial, Polynomial, VarTable};
pub use rational::Rational;
pub use sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no value assigned to variable '{0}'")]
    MissingAssignment(String),
    #[error("no substitution given for variable '{0}'")]
    MissingSubstitution(String),
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("modular reconstruction failed: {0}")]
    Reconstruction(String),
}

/// A commutative ring with by-reference helpers.
///
/// The helpers have clone-based defaults; exact scalar types override them to
/// avoid the extra copies in inner loops.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.sub_ref(other);
    }
    fn from_i64(v: i64) -> Self;
}

/// An exact field of characteristic zero.
pub trait Field: Ring + Display {
    fn try_inv(&self) -> Result<Self, AlgebraError>;

    fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul_ref(&other.try_inv()?))
    }

    fn from_rational(q: Rational) -> Self;

    /// Returns the value as a rational when it lies in the prime field.
    fn as_rational(&self) -> Option<Rational>;
}

impl Ring for Rational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl Field for Rational {
    fn try_inv(&self) -> Result<Self, AlgebraError> {
        self.inv()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Scalar multiplication of ring elements (tensor entries) by field elements.
pub trait Scale<F> {
    fn scale(&self, s: &F) -> Self;
}

impl<F: Field> Scale<F> for F {
    fn scale(&self, s: &F) -> Self {
        self.mul_ref(s)
    }
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(32 + 1, 2), 528);
        assert_eq!(binomial(3, 5), 0);
    }
}
