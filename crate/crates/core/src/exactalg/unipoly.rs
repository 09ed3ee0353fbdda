//! Dense univariate polynomials over ℚ, lowest coefficient first.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::poly::{Monomial, MultiPoly};
use super::rational::{format_rational, rat, Rational};
use super::AlgError;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    c: Vec<Rational>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("t"))
    }
}

impl UniPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(q: Rational) -> Self {
        Self::new(vec![q])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `t - a`.
    pub fn linear(a: &Rational) -> Self {
        Self::new(vec![-a, rat(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(|| rat(0))
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.c.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![rat(0); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![rat(0); r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dd] * &inv;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * b;
                }
            }
            q[k] = coef;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact quotient, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    /// `self(s) mod m`.
    pub fn compose_mod(&self, s: &Self, m: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(s).add(&Self::constant(c.clone())).rem(m);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, x)| x * rat(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = rat(0);
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self(M)` by Horner's scheme.
    pub fn eval_matrix<F: super::field::Field>(&self, m: &Matrix<F>) -> Matrix<F> {
        let n = m.rows();
        let mut acc = Matrix::<F>::zeros(n, n);
        for c in self.c.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(&F::from_rational(c)));
        }
        acc
    }

    /// Unique polynomial of degree < `xs.len()` through the given points.
    pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let mut acc = Self::zero();
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = rat(1);
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::linear(xj));
                    denom *= xi - xj;
                }
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }

    pub fn to_multi(&self, var: usize) -> MultiPoly {
        MultiPoly::from_terms(self.c.iter().enumerate().map(|(i, c)| (Monomial::var(var, i as u32), c.clone())))
    }

    /// Reads a polynomial that involves at most one variable.
    pub fn from_multi(p: &MultiPoly) -> Result<(Self, Option<usize>), AlgError> {
        let vars: Vec<usize> = (0..p.nvars()).filter(|&i| p.uses_var(i)).collect();
        if vars.len() > 1 {
            return Err(AlgError::NotUnivariate);
        }
        let v = vars.first().copied();
        let c = match v {
            None => vec![p.as_constant().unwrap()],
            Some(v) => p.coeffs_in(v).iter().map(|c| c.as_constant().unwrap()).collect(),
        };
        Ok((Self::new(c), v))
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, i) in (0..self.c.len()).rev().filter(|&i| !self.c[i].is_zero()).enumerate() {
            let c = &self.c[i];
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || i == 0 {
                parts.push(format_rational(&a));
            }
            match i {
                0 => {}
                1 => parts.push(var.to_string()),
                _ => parts.push(format!("{var}^{i}")),
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-1, 0, 1]);
        let b = UniPoly::from_ints(&[1, 1]);
        assert_eq!(a.div_exact(&b), Some(UniPoly::from_ints(&[-1, 1])));
        assert_eq!(a.gcd(&UniPoly::from_ints(&[1, 2, 1])), b);
        let (g, s, t) = a.ext_gcd(&UniPoly::from_ints(&[2, 1]));
        assert!(g.is_one());
        assert_eq!(s.mul(&a).add(&t.mul(&UniPoly::from_ints(&[2, 1]))), g);
    }

    #[test]
    fn interpolation_recovers() {
        let p = UniPoly::from_ints(&[3, -1, 0, 2]);
        let xs: Vec<Rational> = (0..4).map(rat).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(UniPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn format_reads_naturally() {
        assert_eq!(UniPoly::from_ints(&[1, 0, -2, 1]).format("t"), "t^3 - 2*t^2 + 1");
    }
}
