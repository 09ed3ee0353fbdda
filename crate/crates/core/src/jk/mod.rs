//! Jordan–Kronecker invariants and canonical bases of skew pencils.

mod basis;
pub mod chains;
pub mod kronecker;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::exactalg::factor::factor_uni;
use crate::exactalg::rational::{format_rational, rat};
use crate::exactalg::{Matrix, Rational, UniPoly};
use crate::pencil::{char_poly, operator_char_poly, EigenvalueClass, PencilError, SkewPencil};

pub use basis::jk_basis;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JkError {
    #[error("odd number ({count}) of operator Jordan cells of size {size} for eigenvalue {class}")]
    EvennessViolation { class: String, size: usize, count: usize },
    #[error("eigenvalue data is not rational; invariants: {0}")]
    NotRationallyRealizable(JKInvariants),
    #[error("canonical basis construction failed: {0}")]
    Construction(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum JKBlockSpec {
    Jordan { class: EigenvalueClass, size: usize },
    Kronecker { index: usize },
}

impl JKBlockSpec {
    pub fn jordan(lambda: i64, size: usize) -> Self {
        JKBlockSpec::Jordan { class: EigenvalueClass::Finite(rat(lambda)), size }
    }

    pub fn dim(&self) -> usize {
        match self {
            JKBlockSpec::Jordan { class, size } => 2 * size * class.degree(),
            JKBlockSpec::Kronecker { index } => 2 * index + 1,
        }
    }

    pub fn realizable(&self) -> bool {
        match self {
            JKBlockSpec::Jordan { class, .. } => class.realizable(),
            JKBlockSpec::Kronecker { .. } => true,
        }
    }
}

/// Block multiset in canonical order: Jordan classes in class order with sizes
/// descending, then Kronecker blocks with indices descending.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Default)]
pub struct JKInvariants {
    pub blocks: Vec<JKBlockSpec>,
}

impl fmt::Display for JKInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b {
                JKBlockSpec::Jordan { class, size } => format!("J({}; {size})", class.label()),
                JKBlockSpec::Kronecker { index } => format!("K({index})"),
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn sort_key(b: &JKBlockSpec) -> (u8, Option<&EigenvalueClass>, std::cmp::Reverse<usize>) {
    match b {
        JKBlockSpec::Jordan { class, size } => (0, Some(class), std::cmp::Reverse(*size)),
        JKBlockSpec::Kronecker { index } => (1, None, std::cmp::Reverse(*index)),
    }
}

impl JKInvariants {
    pub fn new(mut blocks: Vec<JKBlockSpec>) -> Self {
        blocks.sort_by(|x, y| sort_key(x).cmp(&sort_key(y)));
        JKInvariants { blocks }
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(JKBlockSpec::dim).sum()
    }

    pub fn realizable(&self) -> bool {
        self.blocks.iter().all(JKBlockSpec::realizable)
    }

    /// Jordan sizes grouped by class.
    pub fn jordan_sizes(&self) -> BTreeMap<EigenvalueClass, Vec<usize>> {
        let mut out: BTreeMap<EigenvalueClass, Vec<usize>> = BTreeMap::new();
        for b in &self.blocks {
            if let JKBlockSpec::Jordan { class, size } = b {
                out.entry(class.clone()).or_default().push(*size);
            }
        }
        out
    }

    pub fn kronecker_indices(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                JKBlockSpec::Kronecker { index } => Some(*index),
                _ => None,
            })
            .collect()
    }

    /// All Jordan sizes, descending, ignoring eigenvalues.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.jordan_sizes().into_values().flatten().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Whether quadratic classes are reported as real blocks with a complex
/// eigenvalue pair or as pairs of complex blocks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Complex,
    Real,
}

/// The `k×k` Jordan matrix `λE + (superdiagonal ones)`.
fn jordan_matrix(lambda: &Rational, k: usize) -> Matrix<Rational> {
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            lambda.clone()
        } else if j == i + 1 {
            rat(1)
        } else {
            rat(0)
        }
    })
}

/// `[[0, M], [−Mᵀ, 0]]`.
fn skew_from_corner(m: &Matrix<Rational>) -> Matrix<Rational> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Matrix::zeros(r + c, r + c);
    out.set_block(0, r, m);
    out.set_block(r, 0, &m.transpose().neg());
    out
}

/// Canonical matrices of one block, or `None` when the block has no rational
/// canonical form.
pub fn canonical_block(spec: &JKBlockSpec) -> Option<SkewPencil> {
    match spec {
        JKBlockSpec::Jordan { class, size } => {
            let k = *size;
            match class {
                EigenvalueClass::Finite(l) => Some(SkewPencil {
                    a: skew_from_corner(&jordan_matrix(l, k)),
                    b: skew_from_corner(&Matrix::identity(k)),
                }),
                EigenvalueClass::Infinity => Some(SkewPencil {
                    a: skew_from_corner(&Matrix::identity(k)),
                    b: skew_from_corner(&jordan_matrix(&rat(0), k)),
                }),
                EigenvalueClass::Irreducible(_) => {
                    let (alpha, beta) = class.rational_alpha_beta()?;
                    let mut j = Matrix::zeros(2 * k, 2 * k);
                    for i in 0..k {
                        j[(2 * i, 2 * i)] = alpha.clone();
                        j[(2 * i + 1, 2 * i + 1)] = alpha.clone();
                        j[(2 * i, 2 * i + 1)] = -beta.clone();
                        j[(2 * i + 1, 2 * i)] = beta.clone();
                        if i + 1 < k {
                            j[(2 * i, 2 * i + 2)] = rat(1);
                            j[(2 * i + 1, 2 * i + 3)] = rat(1);
                        }
                    }
                    Some(SkewPencil { a: skew_from_corner(&j), b: skew_from_corner(&Matrix::identity(2 * k)) })
                }
            }
        }
        JKBlockSpec::Kronecker { index } => {
            let k = *index;
            let ma = Matrix::from_fn(k, k + 1, |i, j| if i == j { rat(1) } else { rat(0) });
            let mb = Matrix::from_fn(k, k + 1, |i, j| if j == i + 1 { rat(1) } else { rat(0) });
            Some(SkewPencil { a: skew_from_corner(&ma), b: skew_from_corner(&mb) })
        }
    }
}

/// Block-diagonal canonical pencil for the blocks in the given order.
pub fn canonical_pencil(blocks: &[JKBlockSpec]) -> Option<SkewPencil> {
    let parts: Option<Vec<SkewPencil>> = blocks.iter().map(canonical_block).collect();
    Some(SkewPencil::direct_sum(&parts?))
}

/// Jordan cell counts of `g(op)` from the rank sequence, halved into JK blocks.
fn jk_sizes_from_ranks(op: &Matrix<Rational>, g: &UniPoly, label: &str) -> Result<Vec<usize>, JkError> {
    let n = op.rows();
    let d = g.deg();
    let gm = g.eval_matrix(op);
    let mut ranks = vec![n];
    let mut cur = Matrix::<Rational>::identity(n);
    loop {
        cur = cur.mul(&gm);
        let r = cur.rank();
        let stop = r == *ranks.last().unwrap();
        ranks.push(r);
        if stop {
            break;
        }
    }
    ranks.push(*ranks.last().unwrap());
    let mut sizes = Vec::new();
    for k in (1..ranks.len() - 1).rev() {
        let cells = (ranks[k - 1] + ranks[k + 1] - 2 * ranks[k]) / d;
        if cells % 2 == 1 {
            return Err(JkError::EvennessViolation { class: label.to_string(), size: k, count: cells });
        }
        sizes.extend(std::iter::repeat_n(k, cells / 2));
    }
    Ok(sizes)
}

/// Jordan structure of a regular pencil (no Kronecker blocks).
pub fn regular_jordan_blocks(reg: &SkewPencil) -> Result<Vec<JKBlockSpec>, JkError> {
    let m = reg.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut blocks = Vec::new();
    if let Some(binv) = reg.b.inverse() {
        let op = binv.mul(&reg.a);
        let chi = char_poly(reg);
        for (f, _) in factor_uni(&chi).map_err(PencilError::from)? {
            let class = EigenvalueClass::from_factor(&f);
            for size in jk_sizes_from_ranks(&op, &f, &class.label())? {
                blocks.push(JKBlockSpec::Jordan { class: class.clone(), size });
            }
        }
        return Ok(blocks);
    }
    let (mu, op) = mobius_operator(reg)?;
    let chi = operator_char_poly(&op);
    for (g, _) in factor_uni(&chi).map_err(PencilError::from)? {
        let class = if g == UniPoly::x() { EigenvalueClass::Infinity } else { mobius_back(&g, &mu) };
        for size in jk_sizes_from_ranks(&op, &g, &class.label())? {
            blocks.push(JKBlockSpec::Jordan { class: class.clone(), size });
        }
    }
    Ok(blocks)
}

/// First `μ ∈ {0, 1, …, n}` with `A − μB` invertible and `(A − μB)⁻¹B`.
pub(crate) fn mobius_operator(reg: &SkewPencil) -> Result<(Rational, Matrix<Rational>), JkError> {
    for mu in 0..=reg.dim() as i64 {
        let mu = rat(mu);
        if let Some(inv) = reg.a.sub(&reg.b.scale(&mu)).inverse() {
            return Ok((mu, inv.mul(&reg.b)));
        }
    }
    Err(JkError::Construction("pencil is not regular".into()))
}

/// Class of `t` from a factor `g(s)` with `s = 1/(t − μ)`.
fn mobius_back(g: &UniPoly, mu: &Rational) -> EigenvalueClass {
    let d = g.deg();
    let shift = UniPoly::linear(mu);
    let mut f = UniPoly::zero();
    for i in 0..=d {
        f = f.add(&shift.pow(d - i).scale(&g.coeff(i)));
    }
    EigenvalueClass::from_factor(&f.monic())
}

/// Jordan–Kronecker invariants of an arbitrary skew pencil.
pub fn jk_invariants(p: &SkewPencil, _mode: Mode) -> Result<JKInvariants, JkError> {
    let indices = kronecker::kronecker_indices(p);
    let mut blocks: Vec<JKBlockSpec> = indices.iter().map(|&index| JKBlockSpec::Kronecker { index }).collect();
    let reg = if indices.is_empty() {
        p.clone()
    } else {
        let sols = kronecker::minimal_basis(p);
        let (_, regular) = kronecker::core_and_regular(p, &sols);
        p.restrict(&regular)
    };
    blocks.extend(regular_jordan_blocks(&reg)?);
    let inv = JKInvariants::new(blocks);
    if inv.dim() != p.dim() {
        return Err(JkError::Construction(format!(
            "block dimensions sum to {} but the space has dimension {}",
            inv.dim(),
            p.dim()
        )));
    }
    Ok(inv)
}

/// A canonical basis: `CᵀAC` and `CᵀBC` are the canonical block matrices of
/// `invariants.blocks`, in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct JKDecomposition {
    pub invariants: JKInvariants,
    pub c: Matrix<Rational>,
}

pub fn verify_canonical(d: &JKDecomposition, p: &SkewPencil) -> bool {
    let Some(canon) = canonical_pencil(&d.invariants.blocks) else { return false };
    if canon.dim() != p.dim() || d.c.rows() != p.dim() || !d.c.is_square() {
        return false;
    }
    if p.dim() > 0 && d.c.rank() < p.dim() {
        return false;
    }
    p.congruence(&d.c) == canon
}

/// The JSON report `{"blocks": [...], "realizable": bool}`.
pub fn report_json(inv: &JKInvariants, mode: Mode) -> Value {
    let blocks: Vec<Value> = inv
        .blocks
        .iter()
        .map(|b| match b {
            JKBlockSpec::Kronecker { index } => json!({"kind": "kronecker", "index": index}),
            JKBlockSpec::Jordan { class, size } => {
                let mut v = json!({"kind": "jordan", "eigenvalue": eigenvalue_json(class), "size": size});
                if let Some((alpha, beta2)) = class.alpha_beta2() {
                    let obj = v.as_object_mut().unwrap();
                    let negative = num_traits::Signed::is_positive(&beta2);
                    let kind = match (mode, negative) {
                        (Mode::Real, true) => "complex-pair",
                        (Mode::Real, false) => "real-conjugates",
                        (Mode::Complex, _) => "conjugate-roots",
                    };
                    obj.insert("class".into(), json!(kind));
                    obj.insert("alpha".into(), json!(format_rational(&alpha)));
                    obj.insert("beta_squared".into(), json!(format_rational(&beta2)));
                }
                v
            }
        })
        .collect();
    json!({"blocks": blocks, "realizable": inv.realizable()})
}

fn eigenvalue_json(c: &EigenvalueClass) -> Value {
    match c {
        EigenvalueClass::Finite(l) => json!(format_rational(l)),
        EigenvalueClass::Infinity => json!("inf"),
        EigenvalueClass::Irreducible(f) => json!(f.format("t")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::standard_symplectic;

    #[test]
    fn zero_two_by_two() {
        let p = SkewPencil::new(Matrix::zeros(2, 2), standard_symplectic(1)).unwrap();
        let inv = jk_invariants(&p, Mode::Complex).unwrap();
        assert_eq!(inv.blocks, vec![JKBlockSpec::jordan(0, 1)]);
    }

    #[test]
    fn zero_one_by_one() {
        let p = SkewPencil::new(Matrix::zeros(1, 1), Matrix::zeros(1, 1)).unwrap();
        let inv = jk_invariants(&p, Mode::Complex).unwrap();
        assert_eq!(inv.blocks, vec![JKBlockSpec::Kronecker { index: 0 }]);
        assert_eq!(
            report_json(&inv, Mode::Complex),
            json!({"blocks":[{"kind":"kronecker","index":0}],"realizable":true})
        );
    }

    #[test]
    fn canonical_blocks_recovered() {
        let specs = vec![
            JKBlockSpec::jordan(2, 2),
            JKBlockSpec::jordan(2, 1),
            JKBlockSpec::Jordan { class: EigenvalueClass::Infinity, size: 2 },
            JKBlockSpec::Kronecker { index: 1 },
        ];
        let p = canonical_pencil(&specs).unwrap();
        let inv = jk_invariants(&p, Mode::Complex).unwrap();
        assert_eq!(inv, JKInvariants::new(specs));
    }

    #[test]
    fn identity_is_not_canonical_for_other_pencils() {
        let specs = vec![JKBlockSpec::jordan(1, 1)];
        let p = canonical_pencil(&[JKBlockSpec::jordan(1, 2)]).unwrap();
        let d = JKDecomposition { invariants: JKInvariants::new(specs), c: Matrix::identity(4) };
        assert!(!verify_canonical(&d, &p));
    }
}
