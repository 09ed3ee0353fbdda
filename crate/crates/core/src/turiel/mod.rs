//! Local normal forms of compatible pairs of 2-forms with one non-constant
//! eigenvalue, their invariant distributions, and direct products.
//!
//! Chart of a signature `k_1 ≥ … ≥ k_n`: `x_s^1..x_s^{k_s}, y_s^1..y_s^{k_s}`
//! for each `s`, then `z` and the eigenvalue coordinate `λ`.
//!
//! ```text
//! ω₀ = Σ dx_s^i∧dy_s^i + dz∧dλ
//! ω₁ = λω₀ + Σ dx_s^i∧dy_s^{i+1} + α∧dλ + dy_1^1∧dλ
//! α  = Σ (i+½) y_s^i dx_s^i + (i−½) x_s^i dy_s^i
//! ```

mod checks;
mod distribution;
mod frames;
mod product;

use std::fmt;
use std::str::FromStr;

use crate::exactalg::{frac, rat, Field, Matrix, RatFunc, Rational};
use crate::geometry::{Chart, DiffForm, GeomError, OperatorField};
use crate::invsub::{HeightProfile, HeightTuple};
use crate::jk::{canonical_pencil, JKBlockSpec, JKInvariants};
use crate::pencil::EigenvalueClass;

pub use checks::{check_forms, check_frames, FormChecks, FrameChecks};
pub use distribution::{
    integrability_verdict, invariant_distribution, ker_im_distribution, DistributionSpec, TurielVerdict,
};
pub use frames::{frames, Frames};
pub use product::{
    char_poly_field, flat_distribution, product_build, product_distribution, product_verdicts, resultant_in, Factor,
    FactorDistribution, ProductReport, ProductRow,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TurielError {
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("tuple {tuple} violates the chain constraints for heights {heights:?}")]
    TupleViolatesConstraints { tuple: HeightTuple, heights: Vec<usize> },
    #[error("coordinate name {0:?} appears in two components")]
    NameClash(String),
    #[error("characteristic polynomials of components {0} and {1} share a factor")]
    NonCoprimeFactors(usize, usize),
    #[error("not a flat specification: {0}")]
    NotFlat(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// `k_1 ≥ k_2 ≥ … ≥ k_n ≥ 1`; Jordan blocks of sizes `k_1+1, k_2, …, k_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TurielSignature(Vec<usize>);

impl TurielSignature {
    pub fn new(ks: Vec<usize>) -> Result<Self, TurielError> {
        if ks.is_empty() {
            return Err(TurielError::BadSignature("empty signature".into()));
        }
        if ks.contains(&0) {
            return Err(TurielError::BadSignature("entries must be positive".into()));
        }
        if ks.windows(2).any(|w| w[0] < w[1]) {
            return Err(TurielError::BadSignature(format!("{ks:?} is not non-increasing")));
        }
        Ok(TurielSignature(ks))
    }

    pub fn ks(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.0.iter().sum::<usize>() + 2
    }

    /// Jordan block sizes `k_1+1, k_2, …, k_n`.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v[0] += 1;
        v
    }

    pub fn profile(&self) -> HeightProfile {
        HeightProfile::from_sizes(&self.block_sizes()).expect("signature has positive sizes")
    }

    /// Every signature with at most `max_n` entries bounded by `max_k`.
    pub fn all_up_to(max_n: usize, max_k: usize) -> Vec<TurielSignature> {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (1..=max_k).map(|k| vec![k]).collect();
        while let Some(ks) = stack.pop() {
            if ks.len() < max_n {
                for k in 1..=*ks.last().unwrap() {
                    let mut next = ks.clone();
                    next.push(k);
                    stack.push(next);
                }
            }
            out.push(TurielSignature(ks));
        }
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out
    }
}

impl fmt::Display for TurielSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for TurielSignature {
    type Err = TurielError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ks = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| TurielError::BadSignature(format!("cannot parse {p:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        TurielSignature::new(ks)
    }
}

/// A chart with a pair of 2-forms on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Structure {
    pub chart: Chart,
    pub omega0: DiffForm,
    pub omega1: DiffForm,
}

impl Structure {
    /// Same structure with every coordinate name suffixed.
    pub fn renamed(&self, suffix: &str) -> Structure {
        let chart = Chart::new(self.chart.names().iter().map(|n| format!("{n}{suffix}"))).unwrap();
        let id: Vec<usize> = (0..chart.dim()).collect();
        Structure { omega0: self.omega0.transport(&chart, &id), omega1: self.omega1.transport(&chart, &id), chart }
    }
}

/// Variable indices of a signature's chart. Indices `s` and `i` are
/// one-based; out-of-range lookups give `None`.
#[derive(Clone, Debug)]
pub(crate) struct Coords {
    ks: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Coords {
    pub(crate) fn new(sig: &TurielSignature) -> Self {
        let mut offsets = Vec::new();
        let mut off = 0;
        for &k in sig.ks() {
            offsets.push(off);
            off += 2 * k;
        }
        Coords { ks: sig.ks().to_vec(), offsets, dim: off + 2 }
    }

    pub(crate) fn k(&self, s: usize) -> usize {
        self.ks[s - 1]
    }

    pub(crate) fn n(&self) -> usize {
        self.ks.len()
    }

    pub(crate) fn x(&self, s: usize, i: i64) -> Option<usize> {
        let k = self.k(s) as i64;
        (1..=k).contains(&i).then(|| self.offsets[s - 1] + i as usize - 1)
    }

    pub(crate) fn y(&self, s: usize, i: i64) -> Option<usize> {
        let k = self.k(s) as i64;
        (1..=k).contains(&i).then(|| self.offsets[s - 1] + self.k(s) + i as usize - 1)
    }

    pub(crate) fn z(&self) -> usize {
        self.dim - 2
    }

    pub(crate) fn lam(&self) -> usize {
        self.dim - 1
    }

    /// `x_s^i` as a function, zero out of range.
    pub(crate) fn xf(&self, s: usize, i: i64) -> RatFunc {
        self.x(s, i).map_or_else(RatFunc::zero, RatFunc::var)
    }

    pub(crate) fn yf(&self, s: usize, i: i64) -> RatFunc {
        self.y(s, i).map_or_else(RatFunc::zero, RatFunc::var)
    }

    pub(crate) fn chart(&self) -> Chart {
        let mut names = Vec::new();
        for (s, &k) in self.ks.iter().enumerate() {
            names.extend((1..=k).map(|i| format!("x{}_{}", s + 1, i)));
            names.extend((1..=k).map(|i| format!("y{}_{}", s + 1, i)));
        }
        names.push("z".into());
        names.push("lambda".into());
        Chart::new(names).unwrap()
    }
}

/// `n/2` as a constant function.
pub(crate) fn half(n: i64) -> RatFunc {
    RatFunc::constant(frac(n, 2))
}

pub(crate) fn konst(n: i64) -> RatFunc {
    RatFunc::constant(rat(n))
}

pub(crate) fn delta(a: usize, b: usize) -> RatFunc {
    if a == b {
        RatFunc::one()
    } else {
        RatFunc::zero()
    }
}

/// The normal form of a signature.
pub fn build_normal_form(sig: &TurielSignature) -> Structure {
    let c = Coords::new(sig);
    let chart = c.chart();
    let lam = RatFunc::var(c.lam());
    let mut w0 = DiffForm::zero(&chart, 2);
    for s in 1..=c.n() {
        for i in 1..=c.k(s) as i64 {
            w0.add_term(&[c.x(s, i).unwrap(), c.y(s, i).unwrap()], &RatFunc::one()).unwrap();
        }
    }
    w0.add_term(&[c.z(), c.lam()], &RatFunc::one()).unwrap();
    let mut w1 = w0.scale(&lam);
    for s in 1..=c.n() {
        for i in 1..=c.k(s) as i64 {
            let (xi, yi) = (c.x(s, i).unwrap(), c.y(s, i).unwrap());
            if let Some(yn) = c.y(s, i + 1) {
                w1.add_term(&[xi, yn], &RatFunc::one()).unwrap();
            }
            w1.add_term(&[xi, c.lam()], &half(2 * i + 1).mul(&c.yf(s, i))).unwrap();
            w1.add_term(&[yi, c.lam()], &half(2 * i - 1).mul(&c.xf(s, i))).unwrap();
        }
    }
    w1.add_term(&[c.y(1, 1).unwrap(), c.lam()], &RatFunc::one()).unwrap();
    Structure { chart, omega0: w0, omega1: w1 }
}

/// `P = ω₀⁻¹ω₁` written out term by term from its closed form.
pub fn endomorphism_field(sig: &TurielSignature) -> OperatorField {
    let c = Coords::new(sig);
    let chart = c.chart();
    let n = chart.dim();
    let lam = RatFunc::var(c.lam());
    let mut m = Matrix::<RatFunc>::identity(n).scale(&lam);
    let mut add = |r: usize, col: usize, f: RatFunc| {
        m[(r, col)] = m[(r, col)].add(&f);
    };
    for s in 1..=c.n() {
        let k = c.k(s) as i64;
        for j in 1..=k {
            let col = c.x(s, j).unwrap();
            if let Some(r) = c.x(s, j + 1) {
                add(r, col, RatFunc::one());
            }
            add(c.z(), col, half(2 * j + 1).mul(&c.yf(s, j)));

            let col = c.y(s, k + 1 - j).unwrap();
            if let Some(r) = c.y(s, k - j) {
                add(r, col, RatFunc::one());
            }
            let mut zc = half(2 * k + 1 - 2 * j).mul(&c.xf(s, k - j + 1));
            if s == 1 && j == k {
                zc = zc.add(&RatFunc::one());
            }
            add(c.z(), col, zc);

            let mut xc = half(2 * j - 1).mul(&c.xf(s, j));
            if s == 1 && j == 1 {
                xc = xc.add(&RatFunc::one());
            }
            add(c.x(s, j).unwrap(), c.lam(), xc.neg());
            add(c.y(s, j).unwrap(), c.lam(), half(2 * j + 1).mul(&c.yf(s, j)));
        }
    }
    OperatorField::new(&chart, m).unwrap()
}

/// `D = ½x_1^1 + 1`. The frame exists, and the Jordan type is that of the
/// signature, exactly where `D ≠ 0`; at `D = 0` the blocks degenerate.
pub fn regular_factor(sig: &TurielSignature) -> RatFunc {
    frames::Builder::new(sig).d()
}

/// The coefficient `γ_i` of `∂z` in `e_1^i`.
pub fn gamma(sig: &TurielSignature, i: usize) -> RatFunc {
    frames::Builder::new(sig).gamma(i as i64)
}

/// Constant-eigenvalue data: Jordan blocks with rational eigenvalues only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatSpec {
    invariants: JKInvariants,
}

impl FlatSpec {
    pub fn new(invariants: JKInvariants) -> Result<Self, TurielError> {
        if invariants.blocks.is_empty() {
            return Err(TurielError::NotFlat("no blocks".into()));
        }
        for b in &invariants.blocks {
            match b {
                JKBlockSpec::Jordan { class: EigenvalueClass::Finite(_), .. } => {}
                other => return Err(TurielError::NotFlat(format!("{other:?}"))),
            }
        }
        Ok(FlatSpec { invariants })
    }

    pub fn invariants(&self) -> &JKInvariants {
        &self.invariants
    }

    /// Eigenvalues with their height profiles, in canonical block order.
    pub fn classes(&self) -> Vec<(Rational, HeightProfile)> {
        self.invariants
            .jordan_sizes()
            .into_iter()
            .map(|(class, sizes)| match class {
                EigenvalueClass::Finite(l) => (l, HeightProfile::from_sizes(&sizes).unwrap()),
                _ => unreachable!("checked in FlatSpec::new"),
            })
            .collect()
    }
}

/// Constant forms whose matrices are the canonical block matrices, on
/// coordinates `u1, u2, …`.
pub fn build_flat(f: &FlatSpec) -> Structure {
    let p = canonical_pencil(&f.invariants.blocks).expect("finite blocks have canonical forms");
    let chart = Chart::new((1..=p.dim()).map(|i| format!("u{i}"))).unwrap();
    let lift = |m: &Matrix<Rational>| m.map(|q| RatFunc::constant(q.clone()));
    Structure {
        omega0: DiffForm::from_matrix(&chart, &lift(&p.b)),
        omega1: DiffForm::from_matrix(&chart, &lift(&p.a)),
        chart,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::geometry::{compatibility_check, exterior_derivative, jk_invariants_at_point, operator_field};

    fn sig(ks: &[usize]) -> TurielSignature {
        TurielSignature::new(ks.to_vec()).unwrap()
    }

    fn parse(st: &Structure, s: &str) -> RatFunc {
        RatFunc::parse(s, st.chart.names()).unwrap()
    }

    #[test]
    fn signatures() {
        assert!(TurielSignature::new(vec![1, 2]).is_err());
        assert!(TurielSignature::new(vec![]).is_err());
        assert_eq!("2,1".parse::<TurielSignature>().unwrap().block_sizes(), vec![3, 1]);
        assert_eq!(TurielSignature::all_up_to(3, 3).len(), 19);
        assert_eq!(sig(&[2, 1]).dim(), 8);
    }

    #[test]
    fn minimal_normal_form() {
        let st = build_normal_form(&sig(&[1]));
        assert_eq!(st.chart.names(), ["x1_1", "y1_1", "z", "lambda"]);
        let expect = DiffForm::parse(
            &st.chart,
            2,
            &[
                (&["x1_1", "y1_1"], "lambda"),
                (&["z", "lambda"], "lambda"),
                (&["x1_1", "lambda"], "3/2*y1_1"),
                (&["y1_1", "lambda"], "1/2*x1_1 + 1"),
            ],
        )
        .unwrap();
        assert_eq!(st.omega1, expect);
        assert!(exterior_derivative(&st.omega1).unwrap().is_zero());
        assert!(compatibility_check(&st.omega0, &st.omega1).unwrap().all());
    }

    #[test]
    fn matrix_of_two_one() {
        let st = build_normal_form(&sig(&[2, 1]));
        let m = st.omega1.matrix();
        let col = st.chart.dim() - 1;
        let alpha = [parse(&st, "3/2*y1_1"), parse(&st, "5/2*y1_2")];
        let beta_delta = [parse(&st, "1/2*x1_1 + 1"), parse(&st, "3/2*x1_2")];
        for i in 0..2 {
            assert_eq!(m[(i, col)], alpha[i]);
            assert_eq!(m[(2 + i, col)], beta_delta[i]);
        }
        assert_eq!(m[(4, col)], parse(&st, "3/2*y2_1"));
        assert_eq!(m[(5, col)], parse(&st, "1/2*x2_1"));
        assert_eq!(m[(0, 3)], RatFunc::one());
        assert_eq!(m[(0, 2)], parse(&st, "lambda"));
    }

    #[test]
    fn endomorphism_matches_forms() {
        for ks in [vec![1], vec![2, 1], vec![2, 2, 1]] {
            let s = sig(&ks);
            let st = build_normal_form(&s);
            let p = endomorphism_field(&s);
            assert_eq!(operator_field(&st.omega0, &st.omega1).unwrap(), p);
        }
    }

    #[test]
    fn delta_term_on_first_y() {
        // (P−λE)∂y_1^1 = 1/2·x_1^1 ∂z + ∂z for the signature (1).
        let s = sig(&[1]);
        let p = endomorphism_field(&s);
        let st = build_normal_form(&s);
        let lam = RatFunc::var(3);
        let v = p.shift(&lam).apply(&crate::geometry::VectorField::coord(&st.chart, 1)).unwrap();
        let expect = crate::geometry::VectorField::parse(&st.chart, &[("z", "1/2*x1_1 + 1")]).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn flat_examples() {
        let one = |l: i64, k: usize| JKBlockSpec::jordan(l, k);
        let st = build_flat(&FlatSpec::new(JKInvariants::new(vec![one(0, 1)])).unwrap());
        assert_eq!(st.omega0, DiffForm::parse(&st.chart, 2, &[(&["u1", "u2"], "1")]).unwrap());
        assert!(st.omega1.is_zero());
        let st = build_flat(&FlatSpec::new(JKInvariants::new(vec![one(2, 1)])).unwrap());
        assert_eq!(st.omega1, DiffForm::parse(&st.chart, 2, &[(&["u1", "u2"], "2")]).unwrap());
        let inv = JKInvariants::new(vec![one(1, 2), one(3, 1)]);
        let st = build_flat(&FlatSpec::new(inv.clone()).unwrap());
        assert_eq!(st.chart.dim(), 6);
        assert!(compatibility_check(&st.omega0, &st.omega1).unwrap().all());
        for pt in [[0, 1, 2, 3, 4, 5], [7, -1, 0, 2, 2, 9]] {
            let pt: Vec<Rational> = pt.iter().map(|&v| rat(v)).collect();
            assert_eq!(jk_invariants_at_point(&st.omega0, &st.omega1, &pt).unwrap(), inv);
        }
        assert!(FlatSpec::new(JKInvariants::new(vec![JKBlockSpec::Kronecker { index: 0 }])).is_err());
    }
}
