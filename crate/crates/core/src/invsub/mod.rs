//! Invariant subspaces of a pencil with non-degenerate `B`.
//!
//! For a single nilpotent class the invariant subspaces are indexed by height
//! tuples: `m_i` is how many bottom vectors of every chain of height `k_i` are
//! taken. Invariance is checked against random automorphisms built from the
//! block-Toeplitz description of the automorphism Lie algebra.

mod real;
mod zhang;

use std::fmt;

use crate::exactalg::matrix::intersect;
use crate::exactalg::{Matrix, Rational};
use crate::jk::{canonical_pencil, JKBlockSpec, JKDecomposition, JKInvariants};
use crate::pencil::{recursion_operator, EigenvalueClass, SkewPencil, Subspace};

pub use real::{
    complex_jordan_sizes, complex_structure, complexify, real_invariance_check, ComplexStructure, ComplexifiedPencil,
};
pub use zhang::{is_invariant, random_automorphism, random_automorphism_in, Sample, Verdict};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvSubError {
    #[error("invalid height profile: {0}")]
    BadProfile(String),
    #[error("tuple {tuple} violates the chain constraints for heights {heights:?}")]
    TupleViolatesConstraints { tuple: HeightTuple, heights: Vec<usize> },
    #[error("expected a single finite eigenvalue class, found {0}")]
    NotSingleClass(String),
    #[error("expected a single quadratic class with negative discriminant")]
    NotQuadratic,
    #[error("β² = {0} is not the square of a rational")]
    IrrationalBeta(String),
    #[error("B is degenerate")]
    DegenerateB,
}

/// Distinct chain heights `k_1 > … > k_N` with multiplicities `l_i`: the
/// number of canonical blocks of size `k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProfile {
    heights: Vec<usize>,
    mults: Vec<usize>,
}

impl HeightProfile {
    pub fn new(heights: Vec<usize>, mults: Vec<usize>) -> Result<Self, InvSubError> {
        if heights.len() != mults.len() {
            return Err(InvSubError::BadProfile("heights and multiplicities differ in length".into()));
        }
        if heights.is_empty() {
            return Err(InvSubError::BadProfile("no heights given".into()));
        }
        if heights.iter().chain(&mults).any(|&x| x == 0) {
            return Err(InvSubError::BadProfile("heights and multiplicities must be positive".into()));
        }
        if heights.windows(2).any(|w| w[0] <= w[1]) {
            return Err(InvSubError::BadProfile(format!("heights {heights:?} are not strictly decreasing")));
        }
        Ok(HeightProfile { heights, mults })
    }

    /// Profile of a multiset of block sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, InvSubError> {
        let mut s = sizes.to_vec();
        s.sort_unstable_by(|a, b| b.cmp(a));
        let mut heights = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        for k in s {
            if heights.last() == Some(&k) {
                *mults.last_mut().unwrap() += 1;
            } else {
                heights.push(k);
                mults.push(1);
            }
        }
        Self::new(heights, mults)
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn dim(&self) -> usize {
        self.heights.iter().zip(&self.mults).map(|(k, l)| 2 * k * l).sum()
    }

    /// Block sizes in canonical order.
    pub fn sizes(&self) -> Vec<usize> {
        self.heights.iter().zip(&self.mults).flat_map(|(&k, &l)| std::iter::repeat_n(k, l)).collect()
    }

    /// Canonical nilpotent pencil with this profile.
    pub fn canonical(&self) -> SkewPencil {
        let blocks: Vec<JKBlockSpec> = self.sizes().into_iter().map(|k| JKBlockSpec::jordan(0, k)).collect();
        canonical_pencil(&blocks).unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HeightTuple(pub Vec<usize>);

impl fmt::Display for HeightTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl HeightTuple {
    pub fn in_range(&self, h: &HeightProfile) -> bool {
        self.0.len() == h.heights.len() && self.0.iter().zip(&h.heights).all(|(m, k)| m <= k)
    }

    /// `0 ≤ m_i − m_{i+1} ≤ k_i − k_{i+1}`.
    pub fn satisfies(&self, h: &HeightProfile) -> bool {
        self.in_range(h)
            && (0..self.0.len().saturating_sub(1)).all(|i| {
                let (m, m2) = (self.0[i], self.0[i + 1]);
                m >= m2 && m - m2 <= h.heights[i] - h.heights[i + 1]
            })
    }
}

/// All admissible tuples in lexicographic order.
pub fn enumerate_invariant_subspaces(h: &HeightProfile) -> Vec<HeightTuple> {
    let k = &h.heights;
    let n = k.len();
    let mut partial: Vec<Vec<usize>> = (0..=k[n - 1]).map(|m| vec![m]).collect();
    for i in (0..n - 1).rev() {
        let gap = k[i] - k[i + 1];
        partial = partial
            .into_iter()
            .flat_map(|tail| {
                (0..=gap).map(move |d| {
                    let mut t = vec![tail[0] + d];
                    t.extend_from_slice(&tail);
                    t
                })
            })
            .collect();
    }
    let mut out: Vec<HeightTuple> = partial.into_iter().map(HeightTuple).collect();
    out.sort();
    out
}

/// `(k_N + 1)·Π (k_i − k_{i+1} + 1)`.
pub fn invariant_subspace_count(h: &HeightProfile) -> u128 {
    let k = &h.heights;
    let mut c = *k.last().unwrap() as u128 + 1;
    for w in k.windows(2) {
        c *= (w[0] - w[1] + 1) as u128;
    }
    c
}

/// Every tuple with `0 ≤ m_i ≤ k_i`, admissible or not.
pub fn all_tuples(h: &HeightProfile) -> Vec<HeightTuple> {
    let mut out = vec![Vec::new()];
    for &k in &h.heights {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..=k).map(move |m| {
                    let mut t2 = t.clone();
                    t2.push(m);
                    t2
                })
            })
            .collect();
    }
    out.into_iter().map(HeightTuple).collect()
}

/// The single finite class of a decomposition and its height profile.
pub fn nilpotent_profile(inv: &JKInvariants) -> Result<(Rational, HeightProfile), InvSubError> {
    let sizes = inv.jordan_sizes();
    if sizes.len() != 1 || !inv.kronecker_indices().is_empty() {
        return Err(InvSubError::NotSingleClass(inv.to_string()));
    }
    let (class, ks) = sizes.into_iter().next().unwrap();
    match class {
        EigenvalueClass::Finite(l) => Ok((l, HeightProfile::from_sizes(&ks)?)),
        other => Err(InvSubError::NotSingleClass(other.label())),
    }
}

/// `P − λE` of the canonical pencil.
pub(crate) fn canonical_nilpotent(inv: &JKInvariants) -> Result<(Matrix<Rational>, HeightProfile), InvSubError> {
    let (lambda, h) = nilpotent_profile(inv)?;
    let canon = canonical_pencil(&inv.blocks).unwrap();
    let p = recursion_operator(&canon).map_err(|_| InvSubError::DegenerateB)?;
    Ok((p.sub(&Matrix::identity(p.rows()).scale(&lambda)), h))
}

/// `⊕_i (Ker N^{m_i} ∩ Im N^{k_i − m_i})` in the canonical basis of `d`.
pub fn subspace_from_tuple(d: &JKDecomposition, t: &HeightTuple) -> Result<Subspace, InvSubError> {
    let (nil, h) = canonical_nilpotent(&d.invariants)?;
    if !t.satisfies(&h) {
        return Err(InvSubError::TupleViolatesConstraints { tuple: t.clone(), heights: h.heights.clone() });
    }
    let n = nil.rows();
    let mut w = Subspace::zero(n);
    for (&m, &k) in t.0.iter().zip(&h.heights) {
        let ker = nil.pow(m).kernel();
        let im = nil.pow(k - m).column_space();
        w = w.sum(&Subspace::span(n, &intersect(n, &ker, &im)));
    }
    Ok(w)
}

/// `⊕ U^{m_i}(V^{k_i})`: the bottom `m_i` vectors of every chain of height
/// `k_i`, for any tuple in range.
pub fn direct_sum_subspace(h: &HeightProfile, t: &HeightTuple) -> Result<Subspace, InvSubError> {
    if !t.in_range(h) {
        return Err(InvSubError::TupleViolatesConstraints { tuple: t.clone(), heights: h.heights.clone() });
    }
    let n = h.dim();
    let mut vecs = Vec::new();
    let mut off = 0;
    for (i, &k) in h.heights.iter().enumerate() {
        let m = t.0[i];
        for _ in 0..h.mults[i] {
            // e_{k−m+1..k} and f_{1..m}.
            for r in k - m..k {
                vecs.push(unit(n, off + r));
            }
            for j in 0..m {
                vecs.push(unit(n, off + k + j));
            }
            off += 2 * k;
        }
    }
    Ok(Subspace::span(n, &vecs))
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![crate::exactalg::rat(0); n];
    v[i] = crate::exactalg::rat(1);
    v
}

/// A subspace given in canonical coordinates, expressed in the original ones.
pub fn to_original(d: &JKDecomposition, w: &Subspace) -> Subspace {
    w.image(&d.c)
}

/// Canonical coordinates of a subspace given in the original ones.
pub fn to_canonical(d: &JKDecomposition, w: &Subspace) -> Subspace {
    w.image(&d.c.inverse().expect("canonical basis is invertible"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jk::jk_basis;

    fn profile(k: &[usize], l: &[usize]) -> HeightProfile {
        HeightProfile::new(k.to_vec(), l.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_invariant_subspaces(&profile(&[4], &[2])).len(), 5);
        let t: Vec<Vec<usize>> =
            enumerate_invariant_subspaces(&profile(&[2, 1], &[1, 1])).into_iter().map(|t| t.0).collect();
        assert_eq!(t, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]);
        assert_eq!(enumerate_invariant_subspaces(&profile(&[3, 1], &[1, 1])).len(), 6);
        assert_eq!(invariant_subspace_count(&profile(&[4, 2, 1], &[1, 1, 1])), 12);
    }

    #[test]
    fn bad_profiles() {
        assert!(HeightProfile::new(vec![1, 2], vec![1, 1]).is_err());
        assert!(HeightProfile::new(vec![2], vec![0]).is_err());
    }

    #[test]
    fn ker_im_realization_matches_bottoms() {
        let h = profile(&[2, 1], &[1, 2]);
        let p = h.canonical();
        let d = jk_basis(&p).unwrap();
        for t in enumerate_invariant_subspaces(&h) {
            let w = subspace_from_tuple(&d, &t).unwrap();
            let dim: usize = t.0.iter().zip(h.mults()).map(|(m, l)| 2 * m * l).sum();
            assert_eq!(w.dim(), dim);
            assert!(w.same_as(&direct_sum_subspace(&h, &t).unwrap()));
        }
        let bad = HeightTuple(vec![0, 1]);
        assert!(matches!(subspace_from_tuple(&d, &bad), Err(InvSubError::TupleViolatesConstraints { .. })));
    }
}
