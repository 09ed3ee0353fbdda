//! Random test instances: block assemblies and unimodular congruences.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exactalg::rational::rat;
use crate::exactalg::{Matrix, Monomial, MultiPoly, Rational, UniPoly};
use crate::jk::JKBlockSpec;
use crate::pencil::EigenvalueClass;

/// Product of `4n` random elementary row operations with multipliers in
/// `−2..=2`; determinant one.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rational> {
    let mut m = Matrix::<Rational>::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..4 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = rat(*[-2, -1, 1, 2].choose(rng).unwrap());
        for k in 0..n {
            let v = &m[(j, k)] * &c;
            m[(i, k)] += v;
        }
    }
    m
}

/// Random invertible rational matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rational> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| rat(rng.gen_range(-3..=3)));
        if m.rank() == n {
            return m;
        }
    }
}

/// Blocks of total dimension between 1 and `max_dim`: Jordan sizes at most
/// `max_size` with eigenvalues in `−2..=3` (occasionally infinite), Kronecker
/// indices at most `max_index`.
pub fn random_assembly<R: Rng>(rng: &mut R, max_dim: usize, max_size: usize, max_index: usize) -> Vec<JKBlockSpec> {
    let target = rng.gen_range(1..=max_dim);
    let mut blocks = Vec::new();
    let mut dim = 0;
    for _ in 0..64 {
        let spec = if rng.gen_bool(0.3) {
            JKBlockSpec::Kronecker { index: rng.gen_range(0..=max_index) }
        } else {
            let size = rng.gen_range(1..=max_size);
            let class = if rng.gen_bool(0.1) {
                EigenvalueClass::Infinity
            } else {
                EigenvalueClass::Finite(rat(rng.gen_range(-2..=3)))
            };
            JKBlockSpec::Jordan { class, size }
        };
        if dim + spec.dim() <= target {
            dim += spec.dim();
            blocks.push(spec);
        }
        if dim == target {
            break;
        }
    }
    if blocks.is_empty() {
        blocks.push(JKBlockSpec::Kronecker { index: 0 });
    }
    blocks.shuffle(rng);
    blocks
}

/// Polynomial in `nvars` variables with at most `max_terms` terms of total
/// degree at most `max_deg` and coefficients in `−3..=3`.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_deg: u32, max_terms: usize) -> MultiPoly {
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let mut exps = vec![0u32; nvars];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        (Monomial::new(exps), rat(rng.gen_range(-3..=3)))
    });
    MultiPoly::from_terms(terms.collect::<Vec<_>>())
}

/// Jordan blocks with one or two distinct eigenvalues in `−3..=3`, sizes at
/// most `max_size`, total dimension at most `max_dim`.
pub fn random_flat_blocks<R: Rng>(rng: &mut R, max_dim: usize, max_size: usize) -> Vec<JKBlockSpec> {
    let mut eigen: Vec<i64> = (-3..=3).collect();
    eigen.shuffle(rng);
    eigen.truncate(rng.gen_range(1..=2));
    let mut blocks = Vec::new();
    let mut dim = 0;
    for _ in 0..16 {
        let size = rng.gen_range(1..=max_size);
        if dim + 2 * size > max_dim {
            continue;
        }
        dim += 2 * size;
        blocks.push(JKBlockSpec::Jordan { class: EigenvalueClass::Finite(rat(*eigen.choose(rng).unwrap())), size });
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if blocks.is_empty() {
        blocks.push(JKBlockSpec::Jordan { class: EigenvalueClass::Finite(rat(eigen[0])), size: 1 });
    }
    blocks
}

/// Blocks of one quadratic class `t² − 2αt + α² + β²` with `α ∈ −2..=2`,
/// `β ∈ 1..=3`, total dimension at most `max_dim`.
pub fn random_quadratic_blocks<R: Rng>(rng: &mut R, max_dim: usize) -> Vec<JKBlockSpec> {
    let a = rng.gen_range(-2..=2i64);
    let b = rng.gen_range(1..=3i64);
    let f = UniPoly::from_ints(&[a * a + b * b, -2 * a, 1]);
    let class = EigenvalueClass::from_factor(&f);
    let mut blocks = Vec::new();
    let mut dim = 0;
    loop {
        let size = rng.gen_range(1..=(max_dim / 4).max(1));
        if dim + 4 * size > max_dim {
            break;
        }
        dim += 4 * size;
        blocks.push(JKBlockSpec::Jordan { class: class.clone(), size });
        if rng.gen_bool(0.5) {
            break;
        }
    }
    if blocks.is_empty() {
        blocks.push(JKBlockSpec::Jordan { class, size: 1 });
    }
    blocks
}
