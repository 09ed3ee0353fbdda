use num_traits::{One, Zero};

use super::field::Field;
use super::rational::{rat, Rational};

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QI {
    pub re: Rational,
    pub im: Rational,
}

impl QI {
    pub fn new(re: Rational, im: Rational) -> Self {
        QI { re, im }
    }

    pub fn i() -> Self {
        QI { re: rat(0), im: rat(1) }
    }

    pub fn conj(&self) -> Self {
        QI { re: self.re.clone(), im: -&self.im }
    }
}

impl Field for QI {
    fn zero() -> Self {
        QI { re: rat(0), im: rat(0) }
    }
    fn one() -> Self {
        QI { re: rat(1), im: rat(0) }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, o: &Self) -> Self {
        QI { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        QI { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        QI { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn neg(&self) -> Self {
        QI { re: -&self.re, im: -&self.im }
    }
    fn inv(&self) -> Self {
        assert!(!Field::is_zero(self), "inverse of zero");
        let n = &self.re * &self.re + &self.im * &self.im;
        QI { re: &self.re / &n, im: -&self.im / &n }
    }
    fn from_rational(q: &Rational) -> Self {
        QI { re: q.clone(), im: rat(0) }
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.re) && Zero::is_zero(&self.im)
    }
    fn weight(&self) -> usize {
        Field::weight(&self.re) + Field::weight(&self.im)
    }
}
