//! Symplectic Gram–Schmidt for a nilpotent self-adjoint operator.
//!
//! Given a non-degenerate skew form `G` and a nilpotent `N` with
//! `G(Nx, y) = G(x, Ny)`, produce blocks `(e_1..e_h, f_1..f_h)` with
//! `N e_i = e_{i+1}`, `N f_j = f_{j-1}`, `G(e_i, f_j) = δ_ij` and all other
//! pairings zero. Blocks come out tallest first.

use crate::exactalg::matrix::{independent_subset, is_zero_vec, lin_comb};
use crate::exactalg::{Field, Matrix};

pub struct Chain<F> {
    pub e: Vec<Vec<F>>,
    pub f: Vec<Vec<F>>,
}

impl<F> Chain<F> {
    pub fn height(&self) -> usize {
        self.e.len()
    }
}

fn form<F: Field>(g: &Matrix<F>, x: &[F], y: &[F]) -> F {
    g.bilinear(x, y)
}

/// Height of `N` on the span of `basis` (smallest `h` with `N^h = 0` there).
fn height<F: Field>(op: &Matrix<F>, basis: &[Vec<F>]) -> usize {
    let mut cur: Vec<Vec<F>> = basis.to_vec();
    let mut h = 0;
    while cur.iter().any(|v| !is_zero_vec(v)) {
        cur = cur.iter().map(|v| op.mul_vec(v)).collect();
        h += 1;
    }
    h
}

/// Runs the decomposition on the whole coordinate space.
pub fn nilpotent_chains<F: Field>(g: &Matrix<F>, op: &Matrix<F>) -> Option<Vec<Chain<F>>> {
    let n = g.rows();
    let mut basis: Vec<Vec<F>> = Matrix::<F>::identity(n).columns();
    let mut out = Vec::new();
    while !basis.is_empty() {
        let h = height(op, &basis);
        let top = op.pow(h - 1);
        // First pair (a, b) with G(a, N^{h-1} b) ≠ 0.
        let mut pick = None;
        'search: for a in &basis {
            for b in &basis {
                let c = form(g, a, &top.mul_vec(b));
                if !c.is_zero() {
                    pick = Some((a.clone(), b.clone()));
                    break 'search;
                }
            }
        }
        let (a, b) = pick?;
        // H(a, b) = Σ_m G(a, N^{h-1-m} b) N^m, inverted in K[N]/(N^h).
        let mut nb = vec![b.clone()];
        for _ in 1..h {
            nb.push(op.mul_vec(nb.last().unwrap()));
        }
        let hcoef: Vec<F> = (0..h).map(|m| form(g, &a, &nb[h - 1 - m])).collect();
        let inv = truncated_inverse(&hcoef);
        let b2 = lin_comb(n, &inv, &nb);
        let mut e = vec![a];
        for _ in 1..h {
            e.push(op.mul_vec(e.last().unwrap()));
        }
        let mut fr = vec![b2];
        for _ in 1..h {
            fr.push(op.mul_vec(fr.last().unwrap()));
        }
        // fr[m] = N^m b', and f_j = N^{h-j} b'.
        let f: Vec<Vec<F>> = (1..=h).map(|j| fr[h - j].clone()).collect();
        let chain = Chain { e, f };
        basis = complement(g, &chain, &basis, n);
        out.push(chain);
    }
    Some(out)
}

/// Inverse of the truncated power series `c_0 + c_1 N + …` modulo `N^h`.
fn truncated_inverse<F: Field>(c: &[F]) -> Vec<F> {
    let h = c.len();
    let inv0 = c[0].inv();
    let mut d = vec![F::zero(); h];
    d[0] = inv0.clone();
    for m in 1..h {
        let mut s = F::zero();
        for k in 1..=m {
            s = s.add(&c[k].mul(&d[m - k]));
        }
        d[m] = s.mul(&inv0).neg();
    }
    d
}

/// Projects the spanning set onto the `G`-orthogonal complement of the chain.
fn complement<F: Field>(g: &Matrix<F>, ch: &Chain<F>, basis: &[Vec<F>], n: usize) -> Vec<Vec<F>> {
    let projected: Vec<Vec<F>> = basis
        .iter()
        .map(|x| {
            let mut y = x.clone();
            for (e, f) in ch.e.iter().zip(&ch.f) {
                let alpha = form(g, x, f);
                let beta = form(g, x, e);
                for k in 0..n {
                    y[k] = y[k].sub(&alpha.mul(&e[k])).add(&beta.mul(&f[k]));
                }
            }
            y
        })
        .filter(|v| !is_zero_vec(v))
        .collect();
    independent_subset(n, &projected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{rat, Rational};
    use crate::pencil::standard_symplectic;

    #[test]
    fn single_cell_pair() {
        // Jordan 2-block at zero: P = diag(J(0)ᵀ, J(0)).
        let g = standard_symplectic(2);
        let mut p = Matrix::<Rational>::zeros(4, 4);
        p[(1, 0)] = rat(1);
        p[(2, 3)] = rat(1);
        let chains = nilpotent_chains(&g, &p).unwrap();
        assert_eq!(chains.len(), 1);
        let c = &chains[0];
        assert_eq!(c.height(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { rat(1) } else { rat(0) };
                assert_eq!(g.bilinear(&c.e[i], &c.f[j]), want);
                assert_eq!(g.bilinear(&c.e[i], &c.e[j]), rat(0));
                assert_eq!(g.bilinear(&c.f[i], &c.f[j]), rat(0));
            }
        }
        assert_eq!(p.mul_vec(&c.e[0]), c.e[1]);
        assert_eq!(p.mul_vec(&c.f[1]), c.f[0]);
    }
}
