//! Random automorphisms of a nilpotent canonical pencil.
//!
//! Coordinates: level `r = 1..k_i` and index `c = 1..2l_i` per height, with
//! `P g_{r,c} = g_{r+1,c}` and `B(g_{r,c}, g_{s,d}) = Q_{cd}` when
//! `r + s = k_i + 1`. In the canonical basis `g_{r,b} = e_r` and
//! `g_{r,l+b} = f_{k+1−r}` of block `b`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exactalg::matrix::is_zero_vec;
use crate::exactalg::rational::rat;
use crate::exactalg::{Field, Matrix, Rational, QI};
use crate::jk::JKDecomposition;
use crate::pencil::{standard_symplectic, Subspace};

use super::{canonical_nilpotent, HeightProfile};

/// Fields with small random elements.
pub trait Sample: Field + Send + Sync {
    fn sample<R: Rng>(rng: &mut R, bound: i64) -> Self;
}

impl Sample for Rational {
    fn sample<R: Rng>(rng: &mut R, bound: i64) -> Self {
        rat(rng.gen_range(-bound..=bound))
    }
}

impl Sample for QI {
    fn sample<R: Rng>(rng: &mut R, bound: i64) -> Self {
        QI::new(rat(rng.gen_range(-bound..=bound)), rat(rng.gen_range(-bound..=bound)))
    }
}

fn q_matrix<F: Field>(l: usize) -> Matrix<F> {
    standard_symplectic(l).map(F::from_rational)
}

fn random_matrix<F: Sample, R: Rng>(rng: &mut R, r: usize, c: usize) -> Matrix<F> {
    Matrix::from_fn(r, c, |_, _| F::sample(rng, 1))
}

/// Canonical coordinate of `g^{(i)}_{r,c}` (zero-based `r`, `c`).
struct Layout {
    offsets: Vec<usize>,
    heights: Vec<usize>,
    mults: Vec<usize>,
}

impl Layout {
    fn new(h: &HeightProfile) -> Self {
        let mut offsets = Vec::new();
        let mut off = 0;
        for (&k, &l) in h.heights().iter().zip(h.mults()) {
            offsets.push(off);
            off += 2 * k * l;
        }
        Layout { offsets, heights: h.heights().to_vec(), mults: h.mults().to_vec() }
    }

    fn index(&self, i: usize, r: usize, c: usize) -> usize {
        let (k, l) = (self.heights[i], self.mults[i]);
        if c < l {
            self.offsets[i] + 2 * k * c + r
        } else {
            self.offsets[i] + 2 * k * (c - l) + 2 * k - 1 - r
        }
    }
}

/// Random nilpotent element of the automorphism Lie algebra, in canonical
/// coordinates. Diagonal blocks have `C^{i,i}_1 = 0`; off-diagonal `C^{i,j}_1`
/// are kept, and `C^{j,i}_s = Q (C^{i,j}_s)ᵀ Q`.
fn random_nilpotent<F: Sample, R: Rng>(rng: &mut R, h: &HeightProfile, lay: &Layout) -> Matrix<F> {
    let n = h.dim();
    let big_n = lay.heights.len();
    let mut x = Matrix::<F>::zeros(n, n);
    for i in 0..big_n {
        for j in i..big_n {
            let (ki, kj) = (lay.heights[i], lay.heights[j]);
            let (li, lj) = (lay.mults[i], lay.mults[j]);
            let qi = q_matrix::<F>(li);
            let qj = q_matrix::<F>(lj);
            for s in 1..=ki.min(kj) {
                if i == j && s == 1 {
                    continue;
                }
                let (cij, cji) = if i == j {
                    let mut sym = random_matrix::<F, R>(rng, 2 * li, 2 * li);
                    sym = sym.add(&sym.transpose());
                    let c = qi.mul(&sym);
                    (c.clone(), c)
                } else {
                    let c = random_matrix::<F, R>(rng, 2 * li, 2 * lj);
                    let back = qj.mul(&c.transpose()).mul(&qi);
                    (c, back)
                };
                place(&mut x, lay, i, j, s, &cij);
                if i != j {
                    place(&mut x, lay, j, i, s, &cji);
                }
            }
        }
    }
    x
}

/// Adds `C^{i,j}_s` along its Toeplitz diagonal: column level `c'` of height
/// `j` maps to row level `r0 + s − 1 + c'` of height `i`.
fn place<F: Field>(x: &mut Matrix<F>, lay: &Layout, i: usize, j: usize, s: usize, c: &Matrix<F>) {
    let (ki, kj) = (lay.heights[i], lay.heights[j]);
    let r0 = ki.saturating_sub(kj);
    for col_level in 0..kj {
        let row_level = r0 + s - 1 + col_level;
        if row_level >= ki {
            break;
        }
        for d in 0..c.rows() {
            for cc in 0..c.cols() {
                let v = &c[(d, cc)];
                if v.is_zero() {
                    continue;
                }
                let (ri, ci) = (lay.index(i, row_level, d), lay.index(j, col_level, cc));
                x[(ri, ci)] = x[(ri, ci)].add(v);
            }
        }
    }
}

/// `exp(X)` of a nilpotent matrix.
fn exp_nilpotent<F: Field>(x: &Matrix<F>) -> Matrix<F> {
    let n = x.rows();
    let mut acc = Matrix::<F>::identity(n);
    let mut term = Matrix::<F>::identity(n);
    for m in 1..=n {
        term = term.mul(x).scale(&F::from_rational(&rat(m as i64)).inv());
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// Product of up to ten random symplectic transvections `E + c·v vᵀQ`.
fn random_symplectic<F: Sample, R: Rng>(rng: &mut R, l: usize) -> Matrix<F> {
    let q = q_matrix::<F>(l);
    let mut t = Matrix::<F>::identity(2 * l);
    for _ in 0..rng.gen_range(0..=10) {
        let v: Vec<F> = loop {
            let v: Vec<F> = (0..2 * l).map(|_| F::sample(rng, 3)).collect();
            if !is_zero_vec(&v) {
                break v;
            }
        };
        let c = loop {
            let c = F::sample(rng, 3);
            if !c.is_zero() {
                break c;
            }
        };
        let vq: Vec<F> = (0..2 * l).map(|k| (0..2 * l).fold(F::zero(), |a, m| a.add(&v[m].mul(&q[(m, k)])))).collect();
        let tv = Matrix::from_fn(2 * l, 2 * l, |a, b| {
            let base = if a == b { F::one() } else { F::zero() };
            base.add(&c.mul(&v[a]).mul(&vq[b]))
        });
        t = tv.mul(&t);
    }
    t
}

/// `exp(X)·S` in canonical coordinates over any sampling field.
pub fn random_automorphism_in<F: Sample, R: Rng>(h: &HeightProfile, rng: &mut R) -> Matrix<F> {
    let lay = Layout::new(h);
    let n = h.dim();
    let mut s = Matrix::<F>::zeros(n, n);
    for (i, &k) in lay.heights.iter().enumerate() {
        let l = lay.mults[i];
        let t = random_symplectic::<F, R>(rng, l);
        for r in 0..k {
            for a in 0..2 * l {
                for b in 0..2 * l {
                    s[(lay.index(i, r, a), lay.index(i, r, b))] = t[(a, b)].clone();
                }
            }
        }
    }
    let x = random_nilpotent::<F, R>(rng, h, &lay);
    exp_nilpotent(&x).mul(&s)
}

/// Random automorphism of the canonical pencil of `h`.
pub fn random_automorphism(h: &HeightProfile, seed: u64) -> Matrix<Rational> {
    random_automorphism_in(h, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Invariant under `P` and every sampled automorphism.
    InvariantConsistent { trials: usize },
    /// Not invariant; `trial` is `None` when `P` itself moves the subspace.
    NotInvariant { witness: Matrix<Rational>, trial: Option<usize> },
}

impl Verdict {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Verdict::InvariantConsistent { .. })
    }
}

/// Checks `W` (canonical coordinates of `d`) against `P` and `trials` random
/// automorphisms; trial `i` uses seed `seed ^ i`.
pub fn is_invariant(
    w: &Subspace,
    d: &JKDecomposition,
    trials: usize,
    seed: u64,
) -> Result<Verdict, super::InvSubError> {
    let (nil, h) = canonical_nilpotent(&d.invariants)?;
    if !w.is_invariant_under(&nil) {
        return Ok(Verdict::NotInvariant { witness: nil, trial: None });
    }
    let found = (0..trials).into_par_iter().find_map_first(|i| {
        let q = random_automorphism(&h, seed ^ i as u64);
        (!w.is_invariant_under(&q)).then_some((i, q))
    });
    Ok(match found {
        Some((i, q)) => Verdict::NotInvariant { witness: q, trial: Some(i) },
        None => Verdict::InvariantConsistent { trials },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preserves(h: &HeightProfile, q: &Matrix<Rational>) -> bool {
        let p = h.canonical();
        p.congruence(q) == p
    }

    #[test]
    fn automorphisms_preserve_forms() {
        for (k, l) in [(vec![1], vec![1]), (vec![3, 1], vec![1, 2]), (vec![3, 2, 1], vec![1, 1, 1])] {
            let h = HeightProfile::new(k, l).unwrap();
            for seed in 0..5 {
                let q = random_automorphism(&h, seed);
                assert!(preserves(&h, &q));
                assert_eq!(q.rank(), h.dim());
            }
        }
    }

    #[test]
    fn complex_automorphisms_preserve_forms() {
        let h = HeightProfile::new(vec![2, 1], vec![1, 1]).unwrap();
        let p = h.canonical();
        let (a, b) = (p.a.map(QI::from_rational), p.b.map(QI::from_rational));
        let q: Matrix<QI> = random_automorphism_in(&h, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(q.transpose().mul(&a).mul(&q), a);
        assert_eq!(q.transpose().mul(&b).mul(&q), b);
    }

    #[test]
    fn nilpotent_part_commutes_with_p() {
        let h = HeightProfile::new(vec![3, 1], vec![2, 1]).unwrap();
        let lay = Layout::new(&h);
        let x: Matrix<Rational> = random_nilpotent(&mut ChaCha8Rng::seed_from_u64(1), &h, &lay);
        let p = h.canonical();
        let op = crate::pencil::recursion_operator(&p).unwrap();
        assert_eq!(x.mul(&op), op.mul(&x));
        assert!(x.transpose().mul(&p.b).add(&p.b.mul(&x)).is_zero());
    }
}
