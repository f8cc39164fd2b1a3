//! Exact arithmetic kernel: rationals, sparse multivariate Laurent
//! polynomials, dense univariate polynomials and exact linear algebra.
//!
//! Nothing in here touches floating point.

pub mod matrix;
pub mod multipoly;
pub mod rational;
pub mod unipoly;

pub use matrix::Matrix;
pub use multipoly::{Monomial, MultiPoly, Var, VarSet};
pub use rational::{parse_q, q, qi, Q};
pub use unipoly::UniPoly;

use std::fmt;

/// Commutative ring element with an implicit context (variable set,
/// truncation order, ...). Constants are produced from an existing element
/// so that context-carrying rings need no global state.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl Scalar for Q {
    fn zero_like(&self) -> Self {
        qi(0)
    }
    fn one_like(&self) -> Self {
        qi(1)
    }
    fn vanishes(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}
