//! Rational functions `num / den` in lowest terms.
//!
//! The denominator always has graded-lex leading coefficient one and shares no
//! factor with the numerator, so two equal functions are structurally equal.

use std::fmt;

use num_traits::Zero;

use super::field::Field;
use super::poly::MultiPoly;
use super::rational::Rational;
use super::AlgError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc { num: p, den: MultiPoly::one() }
    }
}

impl From<Rational> for RatFunc {
    fn from(q: Rational) -> Self {
        RatFunc::from(MultiPoly::constant(q))
    }
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: MultiPoly::one() };
        }
        if let Some(c) = den.as_constant() {
            return RatFunc { num: num.scale(&c.recip()), den: MultiPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff().recip();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn var(i: usize) -> Self {
        MultiPoly::var(i).into()
    }

    pub fn constant(q: Rational) -> Self {
        q.into()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let dn = self.num.derivative(i);
        if self.den.is_one() {
            return dn.into();
        }
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFunc::new(num, self.den.mul(&self.den))
    }

    /// Value at a point, or `None` when the denominator vanishes there.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval(point) / d)
    }

    pub fn remap_vars(&self, map: &[usize]) -> Self {
        RatFunc::new(self.num.remap_vars(map), self.den.remap_vars(map))
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.den.is_one() {
            self.num.format(names)
        } else {
            format!("({})/({})", self.num.format(names), self.den.format(names))
        }
    }

    /// Parses either a polynomial or `(num)/(den)`.
    pub fn parse(s: &str, names: &[String]) -> Result<Self, AlgError> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some((n, d)) = rest.split_once(")/(") {
                let d =
                    d.strip_suffix(')').ok_or_else(|| AlgError::Parse(format!("unbalanced parentheses in {s:?}")))?;
                let den = MultiPoly::parse(d, names)?;
                if den.is_zero() {
                    return Err(AlgError::Parse(format!("zero denominator in {s:?}")));
                }
                return Ok(RatFunc::new(MultiPoly::parse(n, names)?, den));
            }
        }
        Ok(MultiPoly::parse(t, names)?.into())
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        MultiPoly::zero().into()
    }

    fn one() -> Self {
        MultiPoly::one().into()
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&other.den).add(&other.num), den: other.den.clone() };
        }
        if other.den.is_one() {
            return RatFunc { num: other.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = self.den.gcd(&other.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b).add(&other.num.mul(&a));
        RatFunc::new(num, a.mul(&other.den))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return self.num.mul(&other.num).into();
        }
        if let Some(c) = self.as_constant() {
            return RatFunc { num: other.num.scale(&c), den: other.den.clone() };
        }
        if let Some(c) = other.as_constant() {
            return RatFunc { num: self.num.scale(&c), den: self.den.clone() };
        }
        // Cross-cancel so the products stay reduced.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = other.den.div_exact(&g1).unwrap();
        let n2 = other.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coeff().recip();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        let lc = self.num.leading_coeff().recip();
        RatFunc { num: self.den.scale(&lc), den: self.num.scale(&lc) }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone().into()
    }

    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    fn weight(&self) -> usize {
        let n = self.num.num_terms() + self.den.num_terms();
        let d = self.num.total_degree().unwrap_or(0) + self.den.total_degree().unwrap_or(0);
        if self.is_constant_value() {
            0
        } else {
            16 * n + d as usize
        }
    }
}

impl RatFunc {
    fn is_constant_value(&self) -> bool {
        self.den.is_one() && self.num.is_constant() && !Zero::is_zero(&self.num.leading_coeff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn n() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn f(s: &str) -> RatFunc {
        RatFunc::parse(s, &n()).unwrap()
    }

    #[test]
    fn normalization() {
        let a = f("(x^2 - 1)/(2*x - 2)");
        assert_eq!(a, f("1/2*x + 1/2"));
        let b = f("(1)/(1/2*x + 1)");
        assert_eq!(b.den(), &MultiPoly::parse("x + 2", &n()).unwrap());
        assert_eq!(b.num(), &MultiPoly::constant(rat(2)));
    }

    #[test]
    fn field_identities() {
        let a = f("(x + y)/(x*y - 1)");
        let b = f("(y^2)/(x + 1)");
        assert_eq!(a.add(&b).sub(&b), a);
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(a.mul(&b).div(&b), a);
    }

    #[test]
    fn derivative_quotient_rule() {
        let a = f("(1)/(x)");
        assert_eq!(a.derivative(0), f("(-1)/(x^2)"));
        assert_eq!(a.derivative(1), RatFunc::zero());
    }

    #[test]
    fn format_roundtrip() {
        let a = f("(x + y)/(x*y - 1)");
        assert_eq!(f(&a.format(&n())), a);
    }
}
