//! Skew-symmetric pencils: characteristic polynomial, recursion operator and
//! the splitting into generalized eigenspaces.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactalg::factor::{cmp_poly, factor_uni};
use crate::exactalg::matrix::{independent_subset, rank_of};
use crate::exactalg::rational::{format_rational, parse_rational, rat, rational_sqrt};
use crate::exactalg::{AlgError, Matrix, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PencilError {
    #[error("malformed pencil: {0}")]
    Malformed(String),
    #[error("the form B is degenerate")]
    DegenerateB,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A pair of skew-symmetric forms `(A, B)` on ℚⁿ.
#[derive(Clone, PartialEq)]
pub struct SkewPencil {
    pub a: Matrix<Rational>,
    pub b: Matrix<Rational>,
}

impl fmt::Debug for SkewPencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewPencil").field("A", &self.a).field("B", &self.b).finish()
    }
}

fn check_skew(name: &str, m: &Matrix<Rational>) -> Result<(), PencilError> {
    if !m.is_square() {
        return Err(PencilError::Malformed(format!("{name} is not square")));
    }
    for i in 0..m.rows() {
        for j in i..m.cols() {
            if m[(i, j)] != -m[(j, i)].clone() {
                return Err(PencilError::Malformed(format!(
                    "{name}[{i}][{j}] = {} but {name}[{j}][{i}] = {}; {name} must be skew-symmetric",
                    format_rational(&m[(i, j)]),
                    format_rational(&m[(j, i)])
                )));
            }
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PencilFile {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    b: Vec<Vec<String>>,
}

fn read_matrix(name: &str, n: usize, rows: &[Vec<String>]) -> Result<Matrix<Rational>, PencilError> {
    if rows.len() != n {
        return Err(PencilError::Malformed(format!("{name} has {} rows, expected n = {n}", rows.len())));
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(PencilError::Malformed(format!("{name}[{i}] has {} entries, expected n = {n}", row.len())));
        }
        let mut r = Vec::with_capacity(n);
        for (j, s) in row.iter().enumerate() {
            let q = parse_rational(s).map_err(|e| PencilError::Malformed(format!("{name}[{i}][{j}]: {e}")))?;
            r.push(q);
        }
        out.push(r);
    }
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    Ok(Matrix::from_rows(out))
}

impl SkewPencil {
    pub fn new(a: Matrix<Rational>, b: Matrix<Rational>) -> Result<Self, PencilError> {
        check_skew("A", &a)?;
        check_skew("B", &b)?;
        if a.rows() != b.rows() {
            return Err(PencilError::Malformed("A and B have different sizes".into()));
        }
        Ok(SkewPencil { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn from_json(s: &str) -> Result<Self, PencilError> {
        let f: PencilFile = serde_json::from_str(s).map_err(|e| PencilError::Malformed(e.to_string()))?;
        let a = read_matrix("A", f.n, &f.a)?;
        let b = read_matrix("B", f.n, &f.b)?;
        Self::new(a, b)
    }

    pub fn to_json(&self) -> String {
        let w = |m: &Matrix<Rational>| -> Vec<Vec<String>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(format_rational).collect()).collect()
        };
        serde_json::to_string(&PencilFile { n: self.dim(), a: w(&self.a), b: w(&self.b) }).unwrap()
    }

    /// `(CᵀAC, CᵀBC)`.
    pub fn congruence(&self, c: &Matrix<Rational>) -> SkewPencil {
        let ct = c.transpose();
        SkewPencil { a: ct.mul(&self.a).mul(c), b: ct.mul(&self.b).mul(c) }
    }

    /// The pencil restricted to the span of the given columns.
    pub fn restrict(&self, basis: &[Vec<Rational>]) -> SkewPencil {
        let w = Matrix::from_columns(self.dim(), basis);
        self.congruence(&w)
    }

    pub fn swapped(&self) -> SkewPencil {
        SkewPencil { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn direct_sum(parts: &[SkewPencil]) -> SkewPencil {
        let a: Vec<_> = parts.iter().map(|p| p.a.clone()).collect();
        let b: Vec<_> = parts.iter().map(|p| p.b.clone()).collect();
        SkewPencil { a: Matrix::block_diag(&a), b: Matrix::block_diag(&b) }
    }
}

/// `det(t·B − A)`, made monic when `B` is invertible.
pub fn char_poly(p: &SkewPencil) -> UniPoly {
    let n = p.dim();
    let xs: Vec<Rational> = (0..=n as i64).map(rat).collect();
    let ys: Vec<Rational> = xs.iter().map(|t| p.b.scale(t).sub(&p.a).det()).collect();
    let f = UniPoly::interpolate(&xs, &ys);
    if f.degree() == Some(n) {
        f.monic()
    } else {
        f
    }
}

/// `det(t·E − M)`.
pub fn operator_char_poly(m: &Matrix<Rational>) -> UniPoly {
    let n = m.rows();
    let xs: Vec<Rational> = (0..=n as i64).map(rat).collect();
    let ys: Vec<Rational> = xs.iter().map(|t| Matrix::<Rational>::identity(n).scale(t).sub(m).det()).collect();
    UniPoly::interpolate(&xs, &ys)
}

/// Semisimple part of an operator whose characteristic polynomial is `f^m`
/// with `f` squarefree, by Newton iteration `s ← s − f(s)/f′(s)` in
/// `ℚ[t]/(f^m)`.
pub fn semisimple_part(op: &Matrix<Rational>, f: &UniPoly, m: usize) -> Matrix<Rational> {
    let modulus = f.pow(m);
    let df = f.derivative();
    let mut s = UniPoly::x();
    let iters = (usize::BITS - m.saturating_sub(1).leading_zeros()) as usize + 1;
    for _ in 0..iters {
        let fs = f.compose_mod(&s, &modulus);
        if fs.is_zero() {
            break;
        }
        let dfs = df.compose_mod(&s, &modulus);
        let inv = dfs.inv_mod(&modulus).expect("f' is invertible modulo f^m for squarefree f");
        s = s.sub(&fs.mul(&inv)).rem(&modulus);
    }
    s.eval_matrix(op)
}

/// `P = B⁻¹A`.
pub fn recursion_operator(p: &SkewPencil) -> Result<Matrix<Rational>, PencilError> {
    let binv = p.b.inverse().ok_or(PencilError::DegenerateB)?;
    Ok(binv.mul(&p.a))
}

/// `B(Pu, v) = B(u, Pv)`, i.e. `BP` is skew.
pub fn is_self_adjoint(b: &Matrix<Rational>, op: &Matrix<Rational>) -> bool {
    b.mul(op).is_skew()
}

/// A generalized-eigenvalue class of a pencil.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum EigenvalueClass {
    Finite(Rational),
    /// Monic irreducible factor of degree at least two.
    Irreducible(UniPoly),
    Infinity,
}

impl EigenvalueClass {
    /// Builds the class of a monic irreducible factor.
    pub fn from_factor(f: &UniPoly) -> Self {
        if f.deg() == 1 {
            EigenvalueClass::Finite(-f.coeff(0))
        } else {
            EigenvalueClass::Irreducible(f.monic())
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            EigenvalueClass::Finite(_) | EigenvalueClass::Infinity => 1,
            EigenvalueClass::Irreducible(f) => f.deg(),
        }
    }

    /// The factor `f` itself (`t − λ` for a finite eigenvalue).
    pub fn factor(&self) -> Option<UniPoly> {
        match self {
            EigenvalueClass::Finite(l) => Some(UniPoly::linear(l)),
            EigenvalueClass::Irreducible(f) => Some(f.clone()),
            EigenvalueClass::Infinity => None,
        }
    }

    /// For `t² − pt + q`: `(α, β²)` with `α = p/2`, `β² = q − p²/4`.
    pub fn alpha_beta2(&self) -> Option<(Rational, Rational)> {
        match self {
            EigenvalueClass::Irreducible(f) if f.deg() == 2 => {
                let p = -f.coeff(1);
                let q = f.coeff(0);
                let alpha = &p / rat(2);
                let beta2 = &q - &alpha * &alpha;
                Some((alpha, beta2))
            }
            _ => None,
        }
    }

    /// Rational `(α, β)` with `β > 0` for a complex pair with rational parts.
    pub fn rational_alpha_beta(&self) -> Option<(Rational, Rational)> {
        let (a, b2) = self.alpha_beta2()?;
        if !b2.is_positive() {
            return None;
        }
        rational_sqrt(&b2).map(|b| (a, b))
    }

    /// Whether a canonical basis over ℚ exists for blocks of this class.
    pub fn realizable(&self) -> bool {
        match self {
            EigenvalueClass::Finite(_) | EigenvalueClass::Infinity => true,
            EigenvalueClass::Irreducible(_) => self.rational_alpha_beta().is_some(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            EigenvalueClass::Finite(l) => format_rational(l),
            EigenvalueClass::Infinity => "inf".into(),
            EigenvalueClass::Irreducible(f) => format!("roots of {}", f.format("t")),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            EigenvalueClass::Finite(_) => 0,
            EigenvalueClass::Irreducible(_) => 1,
            EigenvalueClass::Infinity => 2,
        }
    }
}

impl Ord for EigenvalueClass {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (EigenvalueClass::Finite(a), EigenvalueClass::Finite(b)) => a.cmp(b),
            (EigenvalueClass::Irreducible(f), EigenvalueClass::Irreducible(g)) => cmp_poly(f, g),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for EigenvalueClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A subspace of ℚⁿ given by independent columns.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace {
    n: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    /// Spans the given vectors, dropping dependent ones.
    pub fn span(n: usize, vectors: &[Vec<Rational>]) -> Self {
        Subspace { n, basis: independent_subset(n, vectors) }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new() }
    }

    pub fn whole(n: usize) -> Self {
        let id = Matrix::<Rational>::identity(n);
        Subspace { n, basis: id.columns() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn matrix(&self) -> Matrix<Rational> {
        Matrix::from_columns(self.n, &self.basis)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        self.matrix().solve(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        rank_of(self.n, &all) == self.dim()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix<Rational>) -> Subspace {
        let imgs: Vec<_> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(self.n, &imgs)
    }

    pub fn is_invariant_under(&self, m: &Matrix<Rational>) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.n, &all)
    }
}

/// A generalized eigenspace together with the restricted pencil.
#[derive(Clone, Debug)]
pub struct Component {
    pub class: EigenvalueClass,
    /// Multiplicity of the factor in the characteristic polynomial of `P`.
    pub multiplicity: usize,
    pub subspace: Subspace,
    pub pencil: SkewPencil,
}

/// Splits the space into the kernels `Ker f(P)ⁿ`, one per irreducible factor,
/// in canonical class order.
pub fn eigen_split(p: &SkewPencil) -> Result<Vec<Component>, PencilError> {
    let op = recursion_operator(p)?;
    let n = p.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let chi = char_poly(p);
    let mut out = Vec::new();
    for (f, m) in factor_uni(&chi)? {
        let fp = f.eval_matrix(&op).pow(n);
        let basis = fp.kernel();
        let subspace = Subspace::span(n, &basis);
        let pencil = p.restrict(subspace.basis());
        out.push(Component { class: EigenvalueClass::from_factor(&f), multiplicity: m, subspace, pencil });
    }
    out.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(out)
}

/// Standard symplectic form `[[0, E], [−E, 0]]` of size `2k`.
pub fn standard_symplectic(k: usize) -> Matrix<Rational> {
    Matrix::from_fn(2 * k, 2 * k, |i, j| {
        if j == i + k {
            rat(1)
        } else if i == j + k {
            rat(-1)
        } else {
            rat(0)
        }
    })
}

#[cfg(test)]
fn is_zero_matrix(m: &Matrix<Rational>) -> bool {
    m.entries().iter().all(num_traits::Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym2() -> Matrix<Rational> {
        standard_symplectic(1)
    }

    #[test]
    fn char_poly_examples() {
        let b = sym2();
        let p = SkewPencil::new(b.scale(&rat(2)), b.clone()).unwrap();
        assert_eq!(char_poly(&p), UniPoly::from_ints(&[4, -4, 1]));
        let p = SkewPencil::new(Matrix::zeros(2, 2), b.clone()).unwrap();
        assert_eq!(char_poly(&p), UniPoly::from_ints(&[0, 0, 1]));
        let p = SkewPencil::new(b, Matrix::zeros(2, 2)).unwrap();
        assert_eq!(char_poly(&p), UniPoly::one());
    }

    #[test]
    fn recursion_operator_examples() {
        let b = sym2();
        let p = SkewPencil::new(Matrix::zeros(2, 2), b.clone()).unwrap();
        assert!(is_zero_matrix(&recursion_operator(&p).unwrap()));
        let p = SkewPencil::new(b.scale(&rat(3)), b.clone()).unwrap();
        assert_eq!(recursion_operator(&p).unwrap(), Matrix::identity(2).scale(&rat(3)));
        let p = SkewPencil::new(b.clone(), Matrix::zeros(2, 2)).unwrap();
        assert_eq!(recursion_operator(&p), Err(PencilError::DegenerateB));
    }

    #[test]
    fn json_load_names_offending_entry() {
        let bad = r#"{"n":2,"A":[["0","1"],["1","0"]],"B":[["0","1"],["-1","0"]]}"#;
        let err = SkewPencil::from_json(bad).unwrap_err().to_string();
        assert!(err.contains("A[0][1]"), "{err}");
        let good = r#"{"n":2,"A":[["0","1/2"],["-1/2","0"]],"B":[["0","1"],["-1","0"]]}"#;
        let p = SkewPencil::from_json(good).unwrap();
        assert_eq!(SkewPencil::from_json(&p.to_json()).unwrap(), p);
        assert!(SkewPencil::from_json(r#"{"n":2,"A":[["0"]],"B":[]}"#).is_err());
    }

    #[test]
    fn semisimple_part_of_jordan_cell() {
        // P = 2E + N with N a single nilpotent 3-cell.
        let op = Matrix::from_fn(3, 3, |i, j| {
            if i == j {
                rat(2)
            } else if i == j + 1 {
                rat(1)
            } else {
                rat(0)
            }
        });
        let s = semisimple_part(&op, &UniPoly::from_ints(&[-2, 1]), 3);
        assert_eq!(s, Matrix::identity(3).scale(&rat(2)));
        assert_eq!(operator_char_poly(&op), UniPoly::from_ints(&[-2, 1]).pow(3));
    }

    #[test]
    fn class_order() {
        let mut v = [EigenvalueClass::Infinity,
            EigenvalueClass::Irreducible(UniPoly::from_ints(&[2, 0, 1])),
            EigenvalueClass::Finite(rat(3)),
            EigenvalueClass::Irreducible(UniPoly::from_ints(&[1, 0, 1])),
            EigenvalueClass::Finite(rat(-1))];
        v.sort();
        assert_eq!(v[0], EigenvalueClass::Finite(rat(-1)));
        assert_eq!(v[2], EigenvalueClass::Irreducible(UniPoly::from_ints(&[1, 0, 1])));
        assert_eq!(v[4], EigenvalueClass::Infinity);
    }
}
