//! Singular part of a pencil: polynomial solutions of `(A − tB)v(t) = 0`.

use crate::exactalg::matrix::{rank_of, Matrix};
use crate::exactalg::rational::rat;
use crate::exactalg::Rational;
use crate::pencil::SkewPencil;

/// Block-Toeplitz matrix whose kernel is the space of solutions of degree
/// at most `j`: rows hold the coefficients of `t^0 … t^{j+1}`.
fn toeplitz(p: &SkewPencil, j: usize) -> Matrix<Rational> {
    let n = p.dim();
    let mut m = Matrix::zeros((j + 2) * n, (j + 1) * n);
    let neg_b = p.b.neg();
    for c in 0..=j {
        m.set_block(c * n, c * n, &p.a);
        m.set_block((c + 1) * n, c * n, &neg_b);
    }
    m
}

/// Dimension of the space of solutions of degree at most `j`.
pub fn solution_dim(p: &SkewPencil, j: usize) -> usize {
    let t = toeplitz(p, j);
    t.cols() - t.rank()
}

/// `n − rank(A − tB)` over ℚ(t): the number of Kronecker blocks.
pub fn kronecker_count(p: &SkewPencil) -> usize {
    let n = p.dim();
    let generic = (0..=n as i64).map(|mu| p.a.sub(&p.b.scale(&rat(mu))).rank()).max().unwrap_or(0);
    n - generic
}

/// Kronecker indices in descending order, from second differences of the
/// solution dimensions.
pub fn kronecker_indices(p: &SkewPencil) -> Vec<usize> {
    let total = kronecker_count(p);
    let mut out = Vec::new();
    let mut s = vec![0i64, 0i64];
    let mut j = 0;
    while out.len() < total {
        let sj = solution_dim(p, j) as i64;
        let count = sj - 2 * s[s.len() - 1] + s[s.len() - 2];
        for _ in 0..count {
            out.push(j);
        }
        s.push(sj);
        j += 1;
        assert!(j <= p.dim() + 1, "Kronecker index search did not terminate");
    }
    out.reverse();
    out
}

/// A minimal polynomial solution: `coeffs[i]` multiplies `t^i`.
pub struct MinimalSolution {
    pub coeffs: Vec<Vec<Rational>>,
}

impl MinimalSolution {
    pub fn index(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// A minimal polynomial basis of `ker(A − tB)`, lowest degrees first, chosen
/// greedily degree by degree.
pub fn minimal_basis(p: &SkewPencil) -> Vec<MinimalSolution> {
    let n = p.dim();
    let total = kronecker_count(p);
    let mut sols: Vec<MinimalSolution> = Vec::new();
    let mut j = 0;
    while sols.len() < total {
        let len = (j + 1) * n;
        let mut span: Vec<Vec<Rational>> = Vec::new();
        for s in &sols {
            let d = s.index();
            for shift in 0..=(j - d) {
                let mut v = vec![rat(0); len];
                for (i, c) in s.coeffs.iter().enumerate() {
                    v[(i + shift) * n..(i + shift + 1) * n].clone_from_slice(c);
                }
                span.push(v);
            }
        }
        let mut r = rank_of(len, &span);
        for v in toeplitz(p, j).kernel() {
            let mut trial = span.clone();
            trial.push(v.clone());
            let r2 = rank_of(len, &trial);
            if r2 > r {
                r = r2;
                span = trial;
                let coeffs = (0..=j).map(|i| v[i * n..(i + 1) * n].to_vec()).collect();
                sols.push(MinimalSolution { coeffs });
            }
        }
        j += 1;
        assert!(j <= n + 1, "minimal basis search did not terminate");
    }
    sols
}

/// The isotropic core `L` spanned by all solution coefficients, and a basis of
/// a complement of `L` inside `L^⊥` (orthogonal for both forms).
pub fn core_and_regular(p: &SkewPencil, sols: &[MinimalSolution]) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
    let n = p.dim();
    let core: Vec<Vec<Rational>> = sols.iter().flat_map(|s| s.coeffs.iter().cloned()).collect();
    let perp = if core.is_empty() {
        Matrix::<Rational>::identity(n).columns()
    } else {
        let mut rows = Vec::new();
        for l in &core {
            rows.push(p.a.mul_vec(l));
            rows.push(p.b.mul_vec(l));
        }
        Matrix::from_rows(rows).kernel()
    };
    let mut acc = core.clone();
    let mut r = rank_of(n, &acc);
    let mut regular = Vec::new();
    for v in perp {
        acc.push(v.clone());
        let r2 = rank_of(n, &acc);
        if r2 > r {
            r = r2;
            regular.push(v);
        } else {
            acc.pop();
        }
    }
    (core, regular)
}
