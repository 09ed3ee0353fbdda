//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are positional: variable `i` is the `i`-th name of whatever
//! chart or variable list the polynomial is used with. Exponent vectors are
//! stored with trailing zeros trimmed, so polynomials over a prefix of the
//! variables mix freely with polynomials over the full list.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, parse_rational, rat, Rational};
use super::AlgError;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::new(v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, &e) in other.0.iter().enumerate() {
            if out[i] < e {
                return None;
            }
            out[i] -= e;
        }
        Some(Monomial::new(out))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let n = self.0.len().min(other.0.len());
        Monomial::new((0..n).map(|i| self.0[i].min(other.0[i])).collect())
    }

    fn with_exp(&self, i: usize, e: u32) -> Self {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Monomial::new(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.format(&names))
    }
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::term(rat(1), Monomial::var(i, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(rat(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(One::is_one)
    }

    /// One more than the largest variable index that occurs.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map_or_else(|| rat(0), |(_, c)| c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                let e = acc.entry(m).or_insert_with(Rational::zero);
                *e += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { terms: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            (e > 0).then(|| (m.with_exp(i, e - 1), c * rat(e as i64)))
        }))
    }

    /// Value at a point; variables beyond `point.len()` count as zero.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = rat(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = point.get(i).cloned().unwrap_or_else(|| rat(0));
                    t *= num_traits::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable `i` by the polynomial `q`.
    pub fn substitute(&self, i: usize, q: &MultiPoly) -> Self {
        let coeffs = self.coeffs_in(i);
        let mut acc = Self::zero();
        for (e, c) in coeffs.iter().enumerate().rev() {
            acc = acc.mul(q);
            if e < coeffs.len() {
                acc = acc.add(c);
            }
        }
        acc
    }

    /// Renumbers variables: variable `i` becomes `map[i]`.
    pub fn remap_vars(&self, map: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let n = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| map[i] + 1).max().unwrap_or(0);
            let mut v = vec![0; n];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v[map[i]] += e;
                }
            }
            (Monomial::new(v), c.clone())
        }))
    }

    /// Coefficients as a polynomial in variable `i`, lowest degree first.
    pub fn coeffs_in(&self, i: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            out[e].add_term(m.with_exp(i, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(i: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let m = Monomial::var(i, e as u32);
            for (k, x) in &c.terms {
                out.add_term(k.mul(&m), x.clone());
            }
        }
        out
    }

    /// Scales so that the graded-lex leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dinv = dc.recip();
        let mut r = self.clone();
        let mut q = MultiPoly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let tm = rm.div(&dm)?;
            let tc = &rc * &dinv;
            r = r.sub(&d.mul_term(&tm, &tc));
            q.add_term(tm, tc);
        }
        Some(q)
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    fn lowest_var(&self) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.uses_var(i))
    }

    /// Greatest common divisor, normalized to leading coefficient one
    /// (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        if self == other {
            return self.monic();
        }
        if self.num_terms() == 1 || other.num_terms() == 1 {
            let g = self.monomial_content().gcd(&other.monomial_content());
            return Self::term(rat(1), g);
        }
        let nv = self.nvars().max(other.nvars());
        let common = (0..nv).find(|&i| self.uses_var(i) && other.uses_var(i));
        let Some(v) = common else {
            return Self::one();
        };
        // A variable present in only one argument is handled through content.
        if let Some(w) = (0..nv).find(|&i| self.uses_var(i) != other.uses_var(i)) {
            let (has, lacks) = if self.uses_var(w) { (self, other) } else { (other, self) };
            let mut g = lacks.monic();
            for c in has.coeffs_in(w) {
                if c.is_zero() {
                    continue;
                }
                g = g.gcd(&c);
                if g.is_one() {
                    break;
                }
            }
            return g;
        }
        let (ca, pa) = self.content_primitive(v);
        let (cb, pb) = other.content_primitive(v);
        let cg = ca.gcd(&cb);
        if specialized_coprime(&pa, &pb, v) {
            return cg.monic();
        }
        if let Some(g) = heuristic_gcd(&integer_primitive(&pa), &integer_primitive(&pb)) {
            return cg.mul(&g).monic();
        }
        let pg = primitive_prs_gcd(pa, pb, v);
        cg.mul(&pg).monic()
    }

    /// Content with respect to variable `v` and the primitive part.
    fn content_primitive(&self, v: usize) -> (MultiPoly, MultiPoly) {
        let coeffs = self.coeffs_in(v);
        let mut c = MultiPoly::zero();
        for x in coeffs.iter().rev() {
            if x.is_zero() {
                continue;
            }
            c = c.gcd(x);
            if c.is_one() {
                break;
            }
        }
        if c.is_one() {
            return (c, self.clone());
        }
        let p = self.div_exact(&c).expect("content divides polynomial");
        (c, p)
    }

    pub fn lowest_variable(&self) -> Option<usize> {
        self.lowest_var()
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.is_one() {
                factors.push(format_rational(&a));
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("v{i}"));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses `coef*var^k*... (+|-) ...` over the given variable names.
    pub fn parse(s: &str, names: &[String]) -> Result<Self, AlgError> {
        let mut out = MultiPoly::zero();
        let src = s.trim();
        if src.is_empty() {
            return Err(AlgError::Parse("empty polynomial".into()));
        }
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut prev_sig: Option<char> = None;
        for ch in src.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev_sig, Some('^') | Some('*') | Some('/')) {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        sign = -sign;
                    }
                } else {
                    terms.push((sign, std::mem::take(&mut cur)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
                prev_sig = Some(ch);
                continue;
            }
            if !ch.is_whitespace() {
                prev_sig = Some(ch);
            }
            cur.push(ch);
        }
        if cur.trim().is_empty() {
            return Err(AlgError::Parse(format!("dangling operator in {s:?}")));
        }
        terms.push((sign, cur));
        for (sign, t) in terms {
            let mut coef = rat(sign);
            let mut mono = Monomial::one();
            for factor in t.split('*') {
                let f = factor.trim();
                if f.is_empty() {
                    return Err(AlgError::Parse(format!("empty factor in {s:?}")));
                }
                if f.starts_with(|c: char| c.is_ascii_digit()) {
                    coef *= parse_rational(f)?;
                    continue;
                }
                let (name, e) = match f.split_once('^') {
                    Some((n, e)) => {
                        let e: u32 = e.trim().parse().map_err(|_| AlgError::Parse(format!("bad exponent in {f:?}")))?;
                        (n.trim(), e)
                    }
                    None => (f, 1),
                };
                let i = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| AlgError::Parse(format!("unknown variable {name:?}")))?;
                mono = mono.mul(&Monomial::var(i, e));
            }
            out.add_term(mono, coef);
        }
        Ok(out)
    }
}

/// GCD of two polynomials primitive in variable `v`, by primitive PRS.
/// Scalar multiple with coprime integer coefficients.
fn integer_primitive(p: &MultiPoly) -> MultiPoly {
    let l = p.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let q = p.scale(&Rational::from_integer(l));
    let g = q.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()));
    if g.is_zero() {
        return q;
    }
    q.scale(&Rational::from_integer(g).recip())
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
}

/// Symmetric residue in `(−ξ/2, ξ/2]`.
fn sym_mod(c: &BigInt, xi: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r * 2 > *xi {
        r - xi
    } else {
        r
    }
}

/// Heuristic gcd over ℤ for integer polynomials: evaluate at a large integer
/// `ξ`, take the gcd recursively, rebuild by `ξ`-adic expansion and keep the
/// candidate only if it divides both inputs. `None` when no `ξ` worked.
fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let content = |p: &MultiPoly| p.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c.numer()));
    let (ca, cb) = (content(a), content(b));
    let gc = Rational::from_integer(ca.gcd(&cb));
    let a = a.scale(&Rational::from_integer(ca).recip());
    let b = b.scale(&Rational::from_integer(cb).recip());
    let nv = a.nvars().max(b.nvars());
    let Some(x) = (0..nv).rev().find(|&i| a.uses_var(i) || b.uses_var(i)) else {
        return Some(MultiPoly::constant(gc));
    };
    let deg = a.degree_in(x).max(b.degree_in(x)) as u64;
    let mut xi: BigInt = max_norm(&a).min(max_norm(&b)) * 2 + 29;
    for _ in 0..6 {
        if xi.bits() * (deg + 1) > 40_000 {
            return None;
        }
        let c = MultiPoly::constant(Rational::from_integer(xi.clone()));
        let (ea, eb) = (a.substitute(x, &c), b.substitute(x, &c));
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(mut g) = heuristic_gcd(&ea, &eb) {
                let mut cand = MultiPoly::zero();
                let mut i = 0;
                while !g.is_zero() {
                    let gi = MultiPoly::from_terms(
                        g.terms.iter().map(|(m, c)| (m.clone(), Rational::from_integer(sym_mod(c.numer(), &xi)))),
                    );
                    cand = cand.add(&gi.mul_term(&Monomial::var(x, i), &rat(1)));
                    g = g.sub(&gi).scale(&Rational::from_integer(xi.clone()).recip());
                    i += 1;
                }
                if !cand.is_zero() {
                    let cand = integer_primitive(&cand);
                    if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                        return Some(cand.scale(&gc));
                    }
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Whether `a` and `b` have no common factor of positive degree in `v`,
/// shown by sending every other variable to a constant that keeps both
/// degrees in `v`: the image of a common factor would divide the univariate
/// gcd. `false` means undecided.
fn specialized_coprime(a: &MultiPoly, b: &MultiPoly, v: usize) -> bool {
    let nv = a.nvars().max(b.nvars());
    for t in 0..3 {
        let mut sa = a.clone();
        let mut sb = b.clone();
        for i in (0..nv).filter(|&i| i != v) {
            let c = MultiPoly::constant(rat(2 + ((5 * i + 3 * t) % 11) as i64));
            sa = sa.substitute(i, &c);
            sb = sb.substitute(i, &c);
        }
        if sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v) {
            continue;
        }
        return primitive_prs_gcd(sa, sb, v).degree_in(v) == 0;
    }
    false
}

fn primitive_prs_gcd(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return a;
        }
        if b.degree_in(v) == 0 {
            return MultiPoly::one();
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        // Dropping the numeric content as well keeps coefficients small.
        b = if r.is_zero() { r } else { r.content_primitive(v).1.monic() };
    }
}

fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let db = b.degree_in(v);
    let bc = b.coeffs_in(v);
    let lb = bc[db as usize].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coeffs_in(v)[dr as usize].clone();
        let shift = MultiPoly::term(rat(1), Monomial::var(v, dr - db));
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::frac;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &names(&["x", "y", "z"])).unwrap()
    }

    #[test]
    fn gcd_without_coefficient_swell() {
        let a = p("-3*x^5 + 3*x^2*y*z^2 - 2*x^2*z^2");
        let b = p("y^3*z^3 - x^2*y + x*z");
        assert!(a.gcd(&b).is_one());
        let g = p("x + 3*y");
        let (u, v) = (a.mul(&g).mul(&p("z")), b.mul(&g).mul(&p("x*z")));
        // a carries x², so x is common too.
        assert_eq!(u.gcd(&v), g.mul(&p("x*z")));
    }

    #[test]
    fn grlex_order() {
        assert!(Monomial::new(vec![0, 2]) > Monomial::new(vec![1]));
        assert!(Monomial::new(vec![2]) > Monomial::new(vec![1, 1]));
        assert!(Monomial::new(vec![1, 1]) > Monomial::new(vec![0, 2]));
    }

    #[test]
    fn parse_format_roundtrip() {
        let n = names(&["x", "y", "z"]);
        for s in ["3/2*x^2*y - z + 1", "-x", "x*y^3 - 1/2", "0"] {
            let q = MultiPoly::parse(s, &n).unwrap();
            assert_eq!(MultiPoly::parse(&q.format(&n), &n).unwrap(), q);
        }
        assert_eq!(p("x^2 - 2*x + 1"), p("x - 1").pow(2));
        assert!(MultiPoly::parse("w", &n).is_err());
        assert!(MultiPoly::parse("x +", &n).is_err());
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        assert_eq!(a.div_exact(&p("x - y")), Some(p("x + y")));
        assert_eq!(a.div_exact(&p("x + 2")), None);
    }

    #[test]
    fn gcds() {
        let g = p("x + y*z + 1");
        let a = g.mul(&p("x - y"));
        let b = g.mul(&p("z^2 + x"));
        assert_eq!(a.gcd(&b), g.monic());
        assert_eq!(p("x^2*y").gcd(&p("x*y^3 + x")), p("x"));
        assert_eq!(p("1/2*x + 1").gcd(&p("x^2 + 4*x + 4")), p("x + 2"));
        assert!(p("x + 1").gcd(&p("y + 1")).is_one());
    }

    #[test]
    fn derivative_and_eval() {
        let a = p("x^3*y + 2*y");
        assert_eq!(a.derivative(0), p("3*x^2*y"));
        assert_eq!(a.eval(&[rat(2), frac(1, 2)]), rat(5));
        assert_eq!(a.substitute(1, &p("x")), p("x^4 + 2*x"));
    }
}
