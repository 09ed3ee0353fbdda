//! Explicit canonical bases.
//!
//! The singular core `L` (all coefficients of a minimal polynomial basis of
//! `ker(A − tB)`) is isotropic for both forms and `L^⊥ = L ⊕ R` for any
//! regular complement `R`. The regular pencil is put in canonical form on `R`,
//! `R` is then shifted by vectors of `L` until its orthogonal complement is the
//! same for both forms, and the Kronecker blocks are built inside that
//! complement.

use crate::exactalg::matrix::{dot, lin_comb, rank_of};
use crate::exactalg::rational::rat;
use crate::exactalg::{Matrix, Rational, QI};
use crate::pencil::{eigen_split, recursion_operator, semisimple_part, EigenvalueClass, SkewPencil};

use super::chains::{nilpotent_chains, Chain};
use super::kronecker::{core_and_regular, minimal_basis, MinimalSolution};
use super::{
    jk_invariants, mobius_operator, sort_key, verify_canonical, JKBlockSpec, JKDecomposition, JKInvariants, JkError,
    Mode,
};

type Block = (JKBlockSpec, Vec<Vec<Rational>>);

fn fail(what: &str) -> JkError {
    JkError::Construction(what.to_string())
}

/// Coordinates with respect to `basis`, turned into ambient vectors.
fn embed(basis: &[Vec<Rational>], coords: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = basis.first().map_or(0, Vec::len);
    coords.iter().map(|c| lin_comb(n, c, basis)).collect()
}

fn embed_blocks(basis: &[Vec<Rational>], blocks: Vec<Block>) -> Vec<Block> {
    blocks.into_iter().map(|(s, cols)| (s, embed(basis, &cols))).collect()
}

fn chain_columns<F: Clone>(ch: &Chain<F>) -> Vec<Vec<F>> {
    ch.e.iter().chain(&ch.f).cloned().collect()
}

/// Canonical basis of `ℚⁿ`, or a construction error.
pub fn jk_basis(p: &SkewPencil) -> Result<JKDecomposition, JkError> {
    let inv = jk_invariants(p, Mode::Complex)?;
    if !inv.realizable() {
        return Err(JkError::NotRationallyRealizable(inv));
    }
    let n = p.dim();
    let sols = minimal_basis(p);
    let (core, regular) = core_and_regular(p, &sols);
    let reg = p.restrict(&regular);
    let mut blocks = embed_blocks(&regular, regular_blocks(&reg)?);
    blocks.sort_by(|x, y| sort_key(&x.0).cmp(&sort_key(&y.0)));
    if !sols.is_empty() {
        let flat: Vec<Vec<Rational>> = blocks.iter().flat_map(|b| b.1.iter().cloned()).collect();
        let (lifted, c) = deflate(p, &flat, &core)?;
        let mut it = lifted.into_iter();
        for b in &mut blocks {
            for col in &mut b.1 {
                *col = it.next().unwrap();
            }
        }
        let flat: Vec<Vec<Rational>> = blocks.iter().flat_map(|b| b.1.iter().cloned()).collect();
        blocks.extend(kronecker_blocks(p, &sols, &flat, &c)?);
    }
    let specs: Vec<JKBlockSpec> = blocks.iter().map(|b| b.0.clone()).collect();
    let cols: Vec<Vec<Rational>> = blocks.into_iter().flat_map(|b| b.1).collect();
    let d = JKDecomposition { invariants: JKInvariants { blocks: specs }, c: Matrix::from_columns(n, &cols) };
    if d.invariants != inv || !verify_canonical(&d, p) {
        return Err(fail("assembled basis is not canonical"));
    }
    Ok(d)
}

/// Canonical blocks of a regular pencil, in its own coordinates.
fn regular_blocks(reg: &SkewPencil) -> Result<Vec<Block>, JkError> {
    let m = reg.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    if reg.b.inverse().is_some() {
        return finite_blocks(reg);
    }
    let (_, q) = mobius_operator(reg)?;
    let qm = q.pow(m);
    let inf = qm.kernel();
    let fin = qm.column_space();
    let mut out = embed_blocks(&fin, finite_blocks(&reg.restrict(&fin))?);
    out.extend(embed_blocks(&inf, infinity_blocks(&reg.restrict(&inf))?));
    Ok(out)
}

/// On the infinite part `A` is non-degenerate and `N = A⁻¹B` is nilpotent.
fn infinity_blocks(p: &SkewPencil) -> Result<Vec<Block>, JkError> {
    if p.dim() == 0 {
        return Ok(Vec::new());
    }
    let ainv = p.a.inverse().ok_or_else(|| fail("A degenerate on the infinite part"))?;
    let chains = nilpotent_chains(&p.a, &ainv.mul(&p.b)).ok_or_else(|| fail("chain pairing at infinity"))?;
    Ok(chains
        .iter()
        .map(|ch| (JKBlockSpec::Jordan { class: EigenvalueClass::Infinity, size: ch.height() }, chain_columns(ch)))
        .collect())
}

/// Blocks of a pencil with non-degenerate `B`.
fn finite_blocks(p: &SkewPencil) -> Result<Vec<Block>, JkError> {
    if p.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for comp in eigen_split(p)? {
        let pw = recursion_operator(&comp.pencil)?;
        let local = match &comp.class {
            EigenvalueClass::Finite(l) => {
                let nil = pw.sub(&Matrix::identity(pw.rows()).scale(l));
                let chains = nilpotent_chains(&comp.pencil.b, &nil).ok_or_else(|| fail("chain pairing"))?;
                chains
                    .iter()
                    .map(|ch| (JKBlockSpec::Jordan { class: comp.class.clone(), size: ch.height() }, chain_columns(ch)))
                    .collect()
            }
            EigenvalueClass::Irreducible(_) => quadratic_blocks(&comp.pencil, &pw, &comp.class, comp.multiplicity)?,
            EigenvalueClass::Infinity => return Err(fail("infinite class with non-degenerate B")),
        };
        out.extend(embed_blocks(comp.subspace.basis(), local));
    }
    Ok(out)
}

/// Real blocks for a quadratic class with rational `α ± iβ`: the semisimple
/// part gives a complex structure `J`, the nilpotent part is paired over
/// `ℚ(i)` and the chains are split into real and imaginary parts.
fn quadratic_blocks(
    p: &SkewPencil,
    op: &Matrix<Rational>,
    class: &EigenvalueClass,
    mult: usize,
) -> Result<Vec<Block>, JkError> {
    let (alpha, beta) = class.rational_alpha_beta().ok_or_else(|| fail("irrational quadratic class"))?;
    let f = class.factor().unwrap();
    let w = op.rows();
    let s = semisimple_part(op, &f, mult);
    let j = s.sub(&Matrix::identity(w).scale(&alpha)).scale(&beta.recip());
    if j.mul(&j) != Matrix::identity(w).neg() {
        return Err(fail("semisimple part is not a complex structure"));
    }
    let mut acc: Vec<Vec<Rational>> = Vec::new();
    let mut cbasis = Vec::new();
    for x in Matrix::<Rational>::identity(w).columns() {
        if acc.len() == w {
            break;
        }
        let jx = j.mul_vec(&x);
        let mut trial = acc.clone();
        trial.push(x.clone());
        trial.push(jx);
        if rank_of(w, &trial) == acc.len() + 2 {
            acc = trial;
            cbasis.push(x);
        }
    }
    let h = cbasis.len();
    let jc: Vec<Vec<Rational>> = cbasis.iter().map(|c| j.mul_vec(c)).collect();
    let real_basis: Vec<Vec<Rational>> = cbasis.iter().chain(&jc).cloned().collect();
    let to_coords = Matrix::from_columns(w, &real_basis).inverse().ok_or_else(|| fail("complex basis"))?;
    let g =
        Matrix::from_fn(h, h, |k, l| QI::new(p.b.bilinear(&cbasis[k], &cbasis[l]), -p.b.bilinear(&cbasis[k], &jc[l])));
    let nil = op.sub(&s);
    let mut ncx = Matrix::<QI>::zeros(h, h);
    for l in 0..h {
        let coords = to_coords.mul_vec(&nil.mul_vec(&cbasis[l]));
        for k in 0..h {
            ncx[(k, l)] = QI::new(coords[k].clone(), coords[h + k].clone());
        }
    }
    let chains = nilpotent_chains(&g, &ncx).ok_or_else(|| fail("complex chain pairing"))?;
    let realify = |z: &Vec<QI>| -> Vec<Rational> {
        let coefs: Vec<Rational> = z.iter().map(|c| c.re.clone()).chain(z.iter().map(|c| c.im.clone())).collect();
        lin_comb(w, &coefs, &real_basis)
    };
    let mut out = Vec::new();
    for ch in &chains {
        let mut cols = Vec::new();
        for e in &ch.e {
            let e1 = realify(e);
            let e2 = j.mul_vec(&e1).iter().map(|x| -x).collect();
            cols.push(e1);
            cols.push(e2);
        }
        for fv in &ch.f {
            let f1 = realify(fv);
            let f2 = j.mul_vec(&f1);
            cols.push(f1);
            cols.push(f2);
        }
        out.push((JKBlockSpec::Jordan { class: class.clone(), size: ch.height() }, cols));
    }
    Ok(out)
}

/// Shifts each `r_j` by a vector of the core so that `B r'_j` lies in the span
/// of the `C r'_k`, where `C = A − μB` is non-degenerate on the span of the
/// `r`. Then the `C`-orthogonal complement of the shifted span is also its
/// `B`-orthogonal complement. Returns the shifted vectors and `C`.
fn deflate(
    p: &SkewPencil,
    r: &[Vec<Rational>],
    core: &[Vec<Rational>],
) -> Result<(Vec<Vec<Rational>>, Matrix<Rational>), JkError> {
    let n = p.dim();
    let m = r.len();
    let d = core.len();
    let rg = p.restrict(r);
    let mut choice = None;
    for mu in 0..=m as i64 {
        let mu = rat(mu);
        let gc = rg.a.sub(&rg.b.scale(&mu));
        if let Some(inv) = gc.inverse() {
            choice = Some((mu, inv));
            break;
        }
    }
    let (mu, gcinv) = choice.ok_or_else(|| fail("regular part is singular"))?;
    let c = p.a.sub(&p.b.scale(&mu));
    if m == 0 {
        return Ok((Vec::new(), c));
    }
    let nm = gcinv.mul(&rg.b);
    let bl: Vec<Vec<Rational>> = core.iter().map(|l| p.b.mul_vec(l)).collect();
    let cl: Vec<Vec<Rational>> = core.iter().map(|l| c.mul_vec(l)).collect();
    let br: Vec<Vec<Rational>> = r.iter().map(|v| p.b.mul_vec(v)).collect();
    let cr: Vec<Vec<Rational>> = r.iter().map(|v| c.mul_vec(v)).collect();
    let mut sys = Matrix::<Rational>::zeros(m * n, m * d);
    let mut rhs = vec![rat(0); m * n];
    for jj in 0..m {
        for i in 0..n {
            let row = jj * n + i;
            for a in 0..d {
                sys[(row, jj * d + a)] += &bl[a][i];
            }
            rhs[row] = -br[jj][i].clone();
            for k in 0..m {
                let nk = &nm[(k, jj)];
                if num_traits::Zero::is_zero(nk) {
                    continue;
                }
                for a in 0..d {
                    let v = nk * &cl[a][i];
                    sys[(row, k * d + a)] -= v;
                }
                rhs[row] += nk * &cr[k][i];
            }
        }
    }
    let x = sys.solve(&rhs).ok_or_else(|| fail("no deflating shift of the regular part"))?;
    let lifted = (0..m)
        .map(|jj| {
            let l = lin_comb(n, &x[jj * d..(jj + 1) * d], core);
            r[jj].iter().zip(&l).map(|(a, b)| a + b).collect()
        })
        .collect();
    Ok((lifted, c))
}

/// Kronecker blocks `u_1..u_k, w_1..w_{k+1}` inside the complement of the
/// (already deflated) regular vectors.
fn kronecker_blocks(
    p: &SkewPencil,
    sols: &[MinimalSolution],
    regular: &[Vec<Rational>],
    c: &Matrix<Rational>,
) -> Result<Vec<Block>, JkError> {
    let n = p.dim();
    // w_j = v_{k+1−j} for the solution v(t) = Σ v_i t^i; tallest index first.
    let ws: Vec<Vec<Vec<Rational>>> = sols.iter().rev().map(|s| s.coeffs.iter().rev().cloned().collect()).collect();
    let all_w: Vec<(usize, usize, &Vec<Rational>)> =
        ws.iter().enumerate().flat_map(|(b, wb)| wb.iter().enumerate().map(move |(j, w)| (b, j, w))).collect();
    let aw: Vec<Vec<Rational>> = all_w.iter().map(|(_, _, w)| p.a.mul_vec(w)).collect();
    let bw: Vec<Vec<Rational>> = all_w.iter().map(|(_, _, w)| p.b.mul_vec(w)).collect();
    let mut base_rows = Vec::new();
    for v in regular {
        base_rows.push(c.mul_vec(v));
        base_rows.push(p.b.mul_vec(v));
    }
    // Rows of the pairing system; solutions are u with A(u, ·), B(u, ·)
    // prescribed on every w and zero on the regular part.
    let mut rows = base_rows.clone();
    rows.extend(aw.iter().cloned());
    rows.extend(bw.iter().cloned());
    let sys = Matrix::from_rows(rows);
    let mut us: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (b, wb) in ws.iter().enumerate() {
        let k = wb.len() - 1;
        for i in 0..k {
            let mut rhs = vec![rat(0); base_rows.len()];
            rhs.extend(all_w.iter().map(|&(cb, j, _)| rat((cb == b && j == i) as i64)));
            rhs.extend(all_w.iter().map(|&(cb, j, _)| rat((cb == b && j == i + 1) as i64)));
            let u = sys.solve(&rhs).ok_or_else(|| fail("Kronecker pairing system"))?;
            us.push((b, u));
        }
    }
    // Make the u's isotropic by adding core vectors.
    let np = us.len();
    let d = all_w.len();
    let mut eqs = Vec::new();
    let mut rhs = Vec::new();
    for (form, fw) in [(&p.a, &aw), (&p.b, &bw)] {
        for q in 0..np {
            for pp in 0..q {
                let mut row = vec![rat(0); np * d];
                for m in 0..d {
                    row[q * d + m] += dot(&fw[m], &us[pp].1);
                    row[pp * d + m] -= dot(&fw[m], &us[q].1);
                }
                eqs.push(row);
                rhs.push(-form.bilinear(&us[pp].1, &us[q].1));
            }
        }
    }
    let shifts = if eqs.is_empty() {
        vec![rat(0); np * d]
    } else {
        Matrix::from_rows(eqs).solve(&rhs).ok_or_else(|| fail("isotropic Kronecker complement"))?
    };
    let core_vecs: Vec<Vec<Rational>> = all_w.iter().map(|(_, _, w)| (*w).clone()).collect();
    let mut out = Vec::new();
    let mut idx = 0;
    for (b, wb) in ws.iter().enumerate() {
        let k = wb.len() - 1;
        let mut cols = Vec::new();
        for _ in 0..k {
            debug_assert_eq!(us[idx].0, b);
            let shift = lin_comb(n, &shifts[idx * d..(idx + 1) * d], &core_vecs);
            cols.push(us[idx].1.iter().zip(&shift).map(|(a, s)| a + s).collect());
            idx += 1;
        }
        cols.extend(wb.iter().cloned());
        out.push((JKBlockSpec::Kronecker { index: k }, cols));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jk::canonical_pencil;

    fn conjugator(n: usize) -> Matrix<Rational> {
        // Unimodular: identity plus a strictly upper part, then a lower pass.
        let up = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                rat(1)
            } else if j > i {
                rat(((i + 2 * j) % 3) as i64 - 1)
            } else {
                rat(0)
            }
        });
        let lo = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                rat(1)
            } else if j < i {
                rat(((3 * i + j) % 4) as i64 - 2)
            } else {
                rat(0)
            }
        });
        up.mul(&lo)
    }

    fn roundtrip(specs: Vec<JKBlockSpec>) {
        let p0 = canonical_pencil(&specs).unwrap();
        let p = p0.congruence(&conjugator(p0.dim()));
        let d = jk_basis(&p).unwrap();
        assert!(verify_canonical(&d, &p));
        assert_eq!(d.invariants, JKInvariants::new(specs));
    }

    #[test]
    fn jordan_pair_at_three() {
        roundtrip(vec![JKBlockSpec::jordan(3, 2)]);
    }

    #[test]
    fn mixed_with_kronecker() {
        roundtrip(vec![JKBlockSpec::jordan(2, 2), JKBlockSpec::jordan(2, 1), JKBlockSpec::Kronecker { index: 1 }]);
    }

    #[test]
    fn infinity_and_kronecker_zero() {
        roundtrip(vec![
            JKBlockSpec::Jordan { class: EigenvalueClass::Infinity, size: 2 },
            JKBlockSpec::jordan(-1, 1),
            JKBlockSpec::Kronecker { index: 0 },
            JKBlockSpec::Kronecker { index: 2 },
        ]);
    }

    #[test]
    fn complex_pair() {
        // t² + 1, i.e. α = 0, β = 1.
        let class = EigenvalueClass::from_factor(&crate::exactalg::UniPoly::from_ints(&[1, 0, 1]));
        roundtrip(vec![JKBlockSpec::Jordan { class: class.clone(), size: 2 }, JKBlockSpec::Jordan { class, size: 1 }]);
    }

    #[test]
    fn irrational_is_refused() {
        // Companion-type pencil with P² = 2: A = BP on a 4-dim space.
        let b = crate::pencil::standard_symplectic(2);
        let mut a = Matrix::<Rational>::zeros(4, 4);
        a[(0, 3)] = rat(2);
        a[(3, 0)] = rat(-2);
        a[(1, 2)] = rat(1);
        a[(2, 1)] = rat(-1);
        let p = SkewPencil::new(a, b).unwrap();
        match jk_basis(&p) {
            Err(JkError::NotRationallyRealizable(inv)) => assert_eq!(inv.blocks.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
