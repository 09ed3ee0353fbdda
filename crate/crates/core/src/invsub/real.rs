//! Quadratic classes `α ± iβ` with rational `β`: the complex structure, the
//! complexified forms, and invariance through the complex picture.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exactalg::matrix::rank_of;
use crate::exactalg::rational::format_rational;
use crate::exactalg::{Field, Matrix, Rational, QI};
use crate::jk::{jk_basis, JKBlockSpec};
use crate::pencil::{char_poly, recursion_operator, semisimple_part, EigenvalueClass, SkewPencil, Subspace};

use super::zhang::{random_automorphism_in, Verdict};
use super::{HeightProfile, InvSubError};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure {
    pub j: Matrix<Rational>,
    pub alpha: Rational,
    pub beta: Rational,
}

/// `J = (S − αE)/β` with `S` the semisimple part of `P`.
pub fn complex_structure(p: &SkewPencil) -> Result<ComplexStructure, InvSubError> {
    let op = recursion_operator(p).map_err(|_| InvSubError::DegenerateB)?;
    let chi = char_poly(p);
    let factors = crate::exactalg::factor::factor_uni(&chi).map_err(|_| InvSubError::NotQuadratic)?;
    let [(f, m)] = factors.as_slice() else { return Err(InvSubError::NotQuadratic) };
    let class = EigenvalueClass::from_factor(f);
    let (_, beta2) = class.alpha_beta2().ok_or(InvSubError::NotQuadratic)?;
    if !num_traits::Signed::is_positive(&beta2) {
        return Err(InvSubError::NotQuadratic);
    }
    let (alpha, beta) =
        class.rational_alpha_beta().ok_or_else(|| InvSubError::IrrationalBeta(format_rational(&beta2)))?;
    let s = semisimple_part(&op, f, *m);
    let n = op.rows();
    let j = s.sub(&Matrix::identity(n).scale(&alpha)).scale(&beta.recip());
    Ok(ComplexStructure { j, alpha, beta })
}

/// Real and imaginary parts of `A(u, v) − iA(u, Jv)` and the same for `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexifiedPencil {
    pub a_re: Matrix<Rational>,
    pub a_im: Matrix<Rational>,
    pub b_re: Matrix<Rational>,
    pub b_im: Matrix<Rational>,
}

pub fn complexify(p: &SkewPencil, j: &ComplexStructure) -> ComplexifiedPencil {
    ComplexifiedPencil { a_re: p.a.clone(), a_im: p.a.mul(&j.j).neg(), b_re: p.b.clone(), b_im: p.b.mul(&j.j).neg() }
}

impl ComplexifiedPencil {
    /// Value of the complex form at real vectors.
    pub fn eval_b(&self, u: &[Rational], v: &[Rational]) -> QI {
        QI::new(self.b_re.bilinear(u, v), self.b_im.bilinear(u, v))
    }

    pub fn eval_a(&self, u: &[Rational], v: &[Rational]) -> QI {
        QI::new(self.a_re.bilinear(u, v), self.a_im.bilinear(u, v))
    }
}

/// A basis over `ℂ = ℝ[J]`, chosen greedily from the unit vectors.
pub fn complex_basis(j: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let n = j.rows();
    let mut acc: Vec<Vec<Rational>> = Vec::new();
    let mut out = Vec::new();
    for x in Matrix::<Rational>::identity(n).columns() {
        if acc.len() == n {
            break;
        }
        let mut trial = acc.clone();
        trial.push(x.clone());
        trial.push(j.mul_vec(&x));
        if rank_of(n, &trial) == acc.len() + 2 {
            acc = trial;
            out.push(x);
        }
    }
    out
}

/// Jordan sizes of the complexified pencil, from ranks of `(P − λ)^j` over
/// `ℚ(i)` in a complex basis.
pub fn complex_jordan_sizes(p: &SkewPencil, j: &ComplexStructure) -> Vec<usize> {
    let cx = complexify(p, j);
    let basis = complex_basis(&j.j);
    let h = basis.len();
    let ga = Matrix::from_fn(h, h, |k, l| cx.eval_a(&basis[k], &basis[l]));
    let gb = Matrix::from_fn(h, h, |k, l| cx.eval_b(&basis[k], &basis[l]));
    let op = gb.inverse().expect("B is non-degenerate").mul(&ga);
    let lambda = QI::new(j.alpha.clone(), j.beta.clone());
    let nil = op.sub(&Matrix::identity(h).scale(&lambda));
    let mut ranks = vec![h];
    let mut cur = Matrix::<QI>::identity(h);
    while *ranks.last().unwrap() > 0 {
        cur = cur.mul(&nil);
        ranks.push(cur.rank());
    }
    ranks.push(0);
    let mut sizes = Vec::new();
    for k in (1..ranks.len() - 1).rev() {
        let cells = ranks[k - 1] + ranks[k + 1] - 2 * ranks[k];
        sizes.extend(std::iter::repeat_n(k, cells / 2));
    }
    sizes
}

/// Realification `[[Re, −Im], [Im, Re]]` of a complex matrix acting on the
/// coordinates of `x = Σ p_k b_k + q_k J b_k`, taken back to the ambient basis.
fn realify(m: &Matrix<QI>, basis: &[Vec<Rational>], j: &Matrix<Rational>) -> Matrix<Rational> {
    let h = basis.len();
    let n = 2 * h;
    let mr = m.map(|z| z.re.clone());
    let mi = m.map(|z| z.im.clone());
    let mut real = Matrix::<Rational>::zeros(n, n);
    real.set_block(0, 0, &mr);
    real.set_block(0, h, &mi.neg());
    real.set_block(h, 0, &mi);
    real.set_block(h, h, &mr);
    let jb: Vec<Vec<Rational>> = basis.iter().map(|b| j.mul_vec(b)).collect();
    let cols: Vec<Vec<Rational>> = basis.iter().chain(&jb).cloned().collect();
    let r = Matrix::from_columns(n, &cols);
    r.mul(&real).mul(&r.inverse().expect("complex basis"))
}

/// Invariance of a real subspace of a single quadratic component: `J`- and
/// `P`-invariance, then random automorphisms of the complexified pencil.
pub fn real_invariance_check(
    w: &Subspace,
    p: &SkewPencil,
    j: &ComplexStructure,
    trials: usize,
    seed: u64,
) -> Result<Verdict, InvSubError> {
    let op = recursion_operator(p).map_err(|_| InvSubError::DegenerateB)?;
    if !w.is_invariant_under(&op) {
        return Ok(Verdict::NotInvariant { witness: op, trial: None });
    }
    let d = jk_basis(p).map_err(|_| InvSubError::NotQuadratic)?;
    let mut sizes = Vec::new();
    let mut basis = Vec::new();
    let mut col = 0;
    for b in &d.invariants.blocks {
        let JKBlockSpec::Jordan { size: k, .. } = b else { return Err(InvSubError::NotQuadratic) };
        sizes.push(*k);
        // Columns E¹_1, E²_1, …, E¹_k, E²_k, F¹_1, F²_1, …; the complex chain
        // vectors are E¹_i and F¹_i.
        for i in 0..2 * k {
            basis.push(d.c.column(col + 2 * i));
        }
        col += 4 * k;
    }
    let h = HeightProfile::from_sizes(&sizes)?;
    // Multiplication by i on the e-chains and by −i on the f-chains.
    let mut rot = Matrix::<QI>::zeros(basis.len(), basis.len());
    let mut off = 0;
    for &k in &sizes {
        for i in 0..2 * k {
            rot[(off + i, off + i)] = if i < k { QI::i() } else { QI::i().neg() };
        }
        off += 2 * k;
    }
    let rot = realify(&rot, &basis, &j.j);
    if !w.is_invariant_under(&rot) || !w.is_invariant_under(&j.j) {
        return Ok(Verdict::NotInvariant { witness: rot, trial: None });
    }
    let found = (0..trials).into_par_iter().find_map_first(|i| {
        let m: Matrix<QI> = random_automorphism_in(&h, &mut ChaCha8Rng::seed_from_u64(seed ^ i as u64));
        let q = realify(&m, &basis, &j.j);
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
    use crate::exactalg::rational::rat;
    use crate::exactalg::UniPoly;
    use crate::jk::canonical_pencil;

    fn quad_block(f: &[i64], sizes: &[usize]) -> SkewPencil {
        let class = EigenvalueClass::from_factor(&UniPoly::from_ints(f));
        let blocks: Vec<JKBlockSpec> =
            sizes.iter().map(|&size| JKBlockSpec::Jordan { class: class.clone(), size }).collect();
        canonical_pencil(&blocks).unwrap()
    }

    #[test]
    fn rotation_is_its_own_structure() {
        let p = quad_block(&[1, 0, 1], &[1]);
        let j = complex_structure(&p).unwrap();
        assert_eq!(j.j, recursion_operator(&p).unwrap());
    }

    #[test]
    fn structure_identities() {
        for (f, sizes) in [(vec![1, 0, 1], vec![2]), (vec![5, -2, 1], vec![1]), (vec![5, -2, 1], vec![2, 1])] {
            let p = quad_block(&f, &sizes);
            let cs = complex_structure(&p).unwrap();
            let n = p.dim();
            let j = &cs.j;
            assert_eq!(j.mul(j), Matrix::identity(n).neg());
            assert!(p.a.mul(j).is_skew());
            assert!(p.b.mul(j).is_skew());
            let op = recursion_operator(&p).unwrap();
            assert_eq!(op.mul(j), j.mul(&op));
            let mut want = sizes.clone();
            want.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(complex_jordan_sizes(&p, &cs), want);
        }
    }

    #[test]
    fn complexified_b_is_complex_bilinear() {
        let p = quad_block(&[5, -2, 1], &[2]);
        let cs = complex_structure(&p).unwrap();
        let cx = complexify(&p, &cs);
        let u: Vec<Rational> = (0..8).map(|i| rat(i * i - 3)).collect();
        let v: Vec<Rational> = (0..8).map(|i| rat(2 - i)).collect();
        let ju = cs.j.mul_vec(&u);
        assert_eq!(cx.eval_b(&ju, &v), QI::i().mul(&cx.eval_b(&u, &v)));
        assert_eq!(cx.a_im, p.a.mul(&cs.j).neg());
    }

    #[test]
    fn irrational_beta_refused() {
        // P = diag(Mᵀ, M) with M² = −2.
        let mut a = Matrix::<Rational>::zeros(4, 4);
        a[(0, 3)] = rat(-2);
        a[(1, 2)] = rat(1);
        a[(3, 0)] = rat(2);
        a[(2, 1)] = rat(-1);
        let p = SkewPencil::new(a, crate::pencil::standard_symplectic(2)).unwrap();
        assert!(matches!(complex_structure(&p), Err(InvSubError::IrrationalBeta(_))));
    }

    #[test]
    fn real_checks() {
        let p = quad_block(&[1, 0, 1], &[2]);
        let cs = complex_structure(&p).unwrap();
        let n = p.dim();
        let whole = Subspace::whole(n);
        assert!(real_invariance_check(&whole, &p, &cs, 20, 1).unwrap().is_invariant());
        let op = recursion_operator(&p).unwrap();
        let f = UniPoly::from_ints(&[1, 0, 1]).eval_matrix(&op);
        let ker = Subspace::span(n, &f.kernel());
        assert_eq!(ker.dim(), 4);
        assert!(real_invariance_check(&ker, &p, &cs, 50, 2).unwrap().is_invariant());
        // A line is never J-invariant.
        let mut v = vec![rat(0); n];
        v[3] = rat(1);
        let line = Subspace::span(n, &[v]);
        assert!(!real_invariance_check(&line, &p, &cs, 5, 3).unwrap().is_invariant());
    }
}
