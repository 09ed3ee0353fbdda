//! Factorization of univariate polynomials over ℚ.
//!
//! Squarefree decomposition (Yun), then rational roots, then a Kronecker
//! search for the remaining factors. Fine for the small degrees used here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::MultiPoly;
use super::rational::{rat, Rational};
use super::unipoly::UniPoly;
use super::AlgError;

pub const MAX_FACTOR_DEGREE: usize = 32;

/// Irreducible monic factors with multiplicities, for a polynomial in at most
/// one variable. The product of the factors equals `p` up to its leading
/// coefficient.
pub fn factor_rational(p: &MultiPoly) -> Result<Vec<(MultiPoly, usize)>, AlgError> {
    let (u, v) = UniPoly::from_multi(p)?;
    let var = v.unwrap_or(0);
    Ok(factor_uni(&u)?.into_iter().map(|(f, m)| (f.to_multi(var), m)).collect())
}

pub fn factor_uni(p: &UniPoly) -> Result<Vec<(UniPoly, usize)>, AlgError> {
    if p.is_zero() {
        return Err(AlgError::ZeroPolynomial);
    }
    if p.deg() > MAX_FACTOR_DEGREE {
        return Err(AlgError::DegreeTooLarge(p.deg()));
    }
    let mut out = Vec::new();
    for (g, m) in squarefree(&p.monic()) {
        for f in factor_squarefree(&g) {
            out.push((f, m));
        }
    }
    out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    Ok(out)
}

/// Degree first, then coefficients from the top.
pub fn cmp_poly(a: &UniPoly, b: &UniPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for i in (0..=a.deg()).rev() {
            match a.coeff(i).cmp(&b.coeff(i)) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Yun's algorithm on a monic polynomial.
pub fn squarefree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).unwrap();
    let c = df.div_exact(&a0).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_exact(&a).unwrap();
        let c = d.div_exact(&a).unwrap();
        d = c.sub(&nb.derivative());
        if a.deg() > 0 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
    out
}

/// Integer coefficients, primitive, positive leading coefficient.
fn integer_primitive(f: &UniPoly) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in f.coeffs() {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    let sign = if ints.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= m && p < limit {
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (q, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pw);
                pw *= &q;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn factor_squarefree(f: &UniPoly) -> Vec<UniPoly> {
    let mut out = Vec::new();
    let mut rest = f.monic();
    // Rational roots first.
    if rest.coeff(0).is_zero() {
        out.push(UniPoly::x());
        rest = rest.div_exact(&UniPoly::x()).unwrap();
    }
    if rest.deg() >= 1 {
        let ints = integer_primitive(&rest);
        let ps = divisors(&ints[0]);
        let qs = divisors(ints.last().unwrap());
        let mut roots = Vec::new();
        for p in &ps {
            for q in &qs {
                for s in [1, -1] {
                    let r = Rational::new(p * BigInt::from(s), q.clone());
                    if !roots.contains(&r) && rest.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        for r in roots {
            let lin = UniPoly::linear(&r);
            rest = rest.div_exact(&lin).unwrap();
            out.push(lin);
        }
    }
    let mut stack = vec![rest];
    while let Some(g) = stack.pop() {
        if g.deg() == 0 {
            continue;
        }
        match kronecker_split(&g) {
            Some(h) => {
                let q = g.div_exact(&h).unwrap();
                stack.push(h);
                stack.push(q);
            }
            None => out.push(g.monic()),
        }
    }
    out
}

/// A proper factor of `g` (squarefree, no rational roots), if one exists.
fn kronecker_split(g: &UniPoly) -> Option<UniPoly> {
    let n = g.deg();
    if n < 4 {
        return None;
    }
    let gi = integer_primitive(g);
    let eval_int = |a: i64| -> BigInt {
        let x = BigInt::from(a);
        gi.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
    };
    let mut pts: Vec<(i64, BigInt, usize)> = (-24i64..=24)
        .map(|a| {
            let v = eval_int(a);
            let nd = divisors(&v).len();
            (a, v, nd)
        })
        .filter(|(_, v, _)| !v.is_zero())
        .collect();
    pts.sort_by_key(|(a, _, nd)| (*nd, a.unsigned_abs()));
    let lead = gi.last().unwrap().clone();
    for d in 2..=n / 2 {
        let chosen = &pts[..=d];
        let xs: Vec<Rational> = chosen.iter().map(|(a, _, _)| rat(*a)).collect();
        let divs: Vec<Vec<BigInt>> = chosen.iter().map(|(_, v, _)| divisors(v)).collect();
        let mut idx = vec![0usize; d + 1];
        let mut signs = vec![1i64; d + 1];
        'enumerate: loop {
            let ys: Vec<Rational> =
                (0..=d).map(|i| Rational::from_integer(&divs[i][idx[i]] * BigInt::from(signs[i]))).collect();
            let cand = UniPoly::interpolate(&xs, &ys);
            if cand.deg() == d
                && cand.coeffs().iter().all(|c| c.is_integer())
                && (&lead % cand.lc().to_integer().abs()).is_zero()
            {
                if let Some(q) = g.div_exact(&cand) {
                    if q.deg() > 0 {
                        return Some(cand.monic());
                    }
                }
            }
            // Odometer over divisor choices and signs; the first sign stays +.
            let mut k = 0;
            loop {
                if k > d {
                    break 'enumerate;
                }
                if k > 0 && signs[k] == 1 {
                    signs[k] = -1;
                    break;
                }
                signs[k] = 1;
                idx[k] += 1;
                if idx[k] < divs[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(fs: &[(UniPoly, usize)]) -> UniPoly {
        fs.iter().fold(UniPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }

    #[test]
    fn small_cases() {
        let f = factor_uni(&UniPoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(UniPoly::from_ints(&[-1, 1]), 1), (UniPoly::from_ints(&[1, 1]), 1)]);
        let f = factor_uni(&UniPoly::from_ints(&[-2, 1]).pow(4)).unwrap();
        assert_eq!(f, vec![(UniPoly::from_ints(&[-2, 1]), 4)]);
        let f = factor_uni(&UniPoly::from_ints(&[1, 0, 2, 0, 1])).unwrap();
        assert_eq!(f, vec![(UniPoly::from_ints(&[1, 0, 1]), 2)]);
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        let a = UniPoly::from_ints(&[2, 0, 1]);
        let b = UniPoly::from_ints(&[5, -2, 1]);
        let p = a.mul(&b).scale(&rat(3));
        let f = factor_uni(&p).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(expand(&f), p.monic());
    }

    #[test]
    fn irreducible_quartic_stays() {
        let p = UniPoly::from_ints(&[1, 1, 1, 1, 1]);
        assert_eq!(factor_uni(&p).unwrap(), vec![(p, 1)]);
    }

    #[test]
    fn degree_limit() {
        let p = UniPoly::x().pow(33);
        assert_eq!(factor_uni(&p), Err(AlgError::DegreeTooLarge(33)));
    }
}
