use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// An exact field whose elements can fill a [`Matrix`](super::Matrix).
///
/// Operations take references so that big-number and rational-function
/// implementations avoid needless clones.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Rough size of the element; elimination prefers light pivots.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero rational");
        self.recip()
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn weight(&self) -> usize {
        (self.numer().abs().bits() + self.denom().bits()) as usize
    }
}
