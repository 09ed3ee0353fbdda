//! Exact arithmetic: rationals, multivariate polynomials, rational functions,
//! dense matrices over any of them, and univariate factorization over ℚ.

pub mod factor;
pub mod field;
pub mod gauss;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod unipoly;

pub use factor::factor_rational;
pub use field::Field;
pub use gauss::QI;
pub use matrix::Matrix;
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use rational::{frac, rat, Rational};
pub use unipoly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree {0} exceeds the factorization limit of 32")]
    DegreeTooLarge(usize),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
}
