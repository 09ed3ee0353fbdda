//! Invariant distributions of the normal form and their involutivity.
//!
//! A distribution is indexed by a height tuple over the distinct sizes of
//! `k_1+1, k_2, …, k_n`: entry `M` for a height takes the bottom `M` vectors
//! of every chain of that height. For the top height, `M = m_1 + 1` gives
//! `∂z, ∂y_1^1..∂y_1^{m_1}` and `e_1^{k_1}..e_1^{k_1−m_1}`; a smaller height
//! `k_s` with entry `m_s` gives `∂x_s^{k_s}..∂x_s^{k_s−m_s+2}`, `u_s`,
//! `∂y_s^1..∂y_s^{m_s−1}` and `v_s`, where
//!
//! ```text
//! u_s = ∂x_s^{k_s−m_s+1} − (k_s+½)y_s^{k_s}/D · ∂y_1^{m_s}
//! v_s = ∂y_s^{m_s} − ½x_s^1/D · ∂y_1^{m_s},     D = ½x_1^1 + 1.
//! ```

use serde_json::json;

use crate::exactalg::matrix::intersect;
use crate::exactalg::{Field, RatFunc};
use crate::geometry::{involutivity_check, lie_bracket, Involutivity, SpanTest, VectorField};
use crate::invsub::{enumerate_invariant_subspaces, HeightProfile, HeightTuple};

use super::frames::Builder;
use super::{endomorphism_field, TurielError, TurielSignature};

/// A height tuple checked against a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributionSpec {
    tuple: HeightTuple,
    profile: HeightProfile,
}

impl DistributionSpec {
    pub fn new(sig: &TurielSignature, tuple: HeightTuple) -> Result<Self, TurielError> {
        let profile = sig.profile();
        if !tuple.satisfies(&profile) {
            return Err(TurielError::TupleViolatesConstraints { tuple, heights: profile.heights().to_vec() });
        }
        Ok(DistributionSpec { tuple, profile })
    }

    /// Every admissible tuple.
    pub fn all(sig: &TurielSignature) -> Vec<DistributionSpec> {
        let profile = sig.profile();
        enumerate_invariant_subspaces(&profile)
            .into_iter()
            .map(|tuple| DistributionSpec { tuple, profile: profile.clone() })
            .collect()
    }

    /// `Ker N^k ∩ Im N^l` with `N = P − λE`.
    pub fn ker_im(sig: &TurielSignature, k: usize, l: usize) -> Result<Self, TurielError> {
        let t = sig.profile().heights().iter().map(|&h| k.min(h.saturating_sub(l))).collect();
        Self::new(sig, HeightTuple(t))
    }

    pub fn tuple(&self) -> &HeightTuple {
        &self.tuple
    }

    pub fn profile(&self) -> &HeightProfile {
        &self.profile
    }

    pub fn dim(&self) -> usize {
        self.tuple.0.iter().zip(self.profile.mults()).map(|(m, l)| 2 * m * l).sum()
    }

    /// Entry for chains of height `h`.
    fn entry(&self, h: usize) -> usize {
        let i = self.profile.heights().iter().position(|&k| k == h).expect("height of the signature");
        self.tuple.0[i]
    }

    /// Smaller height `h` with `tuple = Ker N^h`, if any.
    fn exceptional_height(&self, sig: &TurielSignature) -> Option<usize> {
        sig.ks()[1..]
            .iter()
            .copied()
            .find(|&h| self.profile.heights().iter().zip(&self.tuple.0).all(|(&k, &m)| m == k.min(h)))
    }
}

fn check(sig: &TurielSignature, d: &DistributionSpec) -> Result<(), TurielError> {
    if d.profile != sig.profile() {
        return Err(TurielError::TupleViolatesConstraints {
            tuple: d.tuple.clone(),
            heights: sig.profile().heights().to_vec(),
        });
    }
    Ok(())
}

/// `u_s` and `v_s` for entry `m`.
fn corrected_pair(b: &Builder, s: usize, m: i64) -> (VectorField, VectorField) {
    let c = &b.c;
    let k = c.k(s) as i64;
    let u = b.field(&[(c.x(s, k - m + 1), RatFunc::one()), (c.y(1, m), b.u_coef(s).neg())]);
    let v = b.field(&[(c.y(s, m), RatFunc::one()), (c.y(1, m), b.v_coef(s).neg())]);
    (u, v)
}

/// Generators of the distribution, in the order listed in the module docs.
pub fn invariant_distribution(sig: &TurielSignature, d: &DistributionSpec) -> Result<Vec<VectorField>, TurielError> {
    check(sig, d)?;
    let b = Builder::new(sig);
    let c = &b.c;
    let k1 = sig.ks()[0] as i64;
    let top = d.entry(sig.ks()[0] + 1) as i64;
    let mut out = Vec::new();
    if top == 0 {
        return Ok(out);
    }
    let m1 = top - 1;
    out.push(b.field(&[(Some(c.z()), RatFunc::one())]));
    for i in 1..=m1 {
        out.push(b.field(&[(c.y(1, i), RatFunc::one())]));
    }
    for i in (k1 - m1..=k1).rev() {
        out.push(b.big_e(i));
    }
    for s in 2..=sig.n() {
        let k = c.k(s) as i64;
        let m = d.entry(k as usize) as i64;
        if m == 0 {
            continue;
        }
        let (u, v) = corrected_pair(&b, s, m);
        for i in (k - m + 2..=k).rev() {
            out.push(b.field(&[(c.x(s, i), RatFunc::one())]));
        }
        out.push(u);
        for i in 1..m {
            out.push(b.field(&[(c.y(s, i), RatFunc::one())]));
        }
        out.push(v);
    }
    Ok(out)
}

/// `Ker N^k ∩ Im N^l` for `N = P − λE`, computed over the rational functions.
pub fn ker_im_distribution(sig: &TurielSignature, k: usize, l: usize) -> Vec<VectorField> {
    let p = endomorphism_field(sig);
    let n = sig.dim();
    let nil = p.shift(&RatFunc::var(n - 1));
    let ker = nil.pow(k).matrix().kernel();
    let im = nil.pow(l).matrix().column_space();
    let chart = p.chart().clone();
    intersect(n, &ker, &im).into_iter().map(|v| VectorField::new(&chart, v).unwrap()).collect()
}

/// `[u_s, v_s]` for the exceptional block and its expected value
/// `k_s/D · ∂y_1^{k_s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PaperWitness {
    pub s: usize,
    pub bracket: VectorField,
    pub matches_formula: bool,
    pub outside_span: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TurielVerdict {
    pub tuple: HeightTuple,
    pub dim: usize,
    pub predicted_integrable: bool,
    pub computed: Involutivity,
    pub paper_witness: Option<PaperWitness>,
}

impl TurielVerdict {
    pub fn integrable(&self) -> bool {
        self.computed.is_involutive()
    }

    /// Computed verdict equals the prediction, and any witness has the
    /// expected closed form and leaves the distribution.
    pub fn agrees(&self) -> bool {
        self.integrable() == self.predicted_integrable
            && self.paper_witness.as_ref().is_none_or(|w| w.matches_formula && w.outside_span)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match &self.computed {
            Involutivity::Involutive => serde_json::Value::Null,
            Involutivity::Witness { i, j, bracket } => json!({"pair": [i, j], "bracket": bracket.to_json()}),
        };
        json!({
            "tuple": self.tuple.0,
            "dimension": self.dim,
            "predicted": if self.predicted_integrable { "integrable" } else { "non-integrable" },
            "computed": if self.integrable() { "integrable" } else { "non-integrable" },
            "witness": witness,
            "commutator": self.paper_witness.as_ref().map(|w| json!({
                "block": w.s,
                "bracket": w.bracket.to_json(),
                "matches_formula": w.matches_formula,
                "outside_span": w.outside_span,
            })),
        })
    }
}

/// Involutivity of the distribution next to the predicted verdict: only
/// `Ker N^{k_s}` for a smaller block `s` fails.
pub fn integrability_verdict(sig: &TurielSignature, d: &DistributionSpec) -> Result<TurielVerdict, TurielError> {
    let gens = invariant_distribution(sig, d)?;
    let computed = involutivity_check(&gens)?;
    let exceptional = d.exceptional_height(sig);
    let paper_witness = match exceptional {
        None => None,
        Some(h) => {
            let s = sig.ks().iter().enumerate().skip(1).find(|(_, &k)| k == h).unwrap().0 + 1;
            let b = Builder::new(sig);
            let (u, v) = corrected_pair(&b, s, h as i64);
            let bracket = lie_bracket(&u, &v)?;
            let expected = b.field(&[(b.c.y(1, h as i64), super::konst(h as i64).mul(&b.d().inv()))]);
            let outside_span = !SpanTest::new(&gens)?.contains(&bracket);
            Some(PaperWitness { s, matches_formula: bracket == expected, bracket, outside_span })
        }
    };
    Ok(TurielVerdict {
        tuple: d.tuple.clone(),
        dim: gens.len(),
        predicted_integrable: exceptional.is_none(),
        computed,
        paper_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::spans_equal;

    fn sig(ks: &[usize]) -> TurielSignature {
        TurielSignature::new(ks.to_vec()).unwrap()
    }

    #[test]
    fn extreme_tuples() {
        let s = sig(&[2, 1]);
        let full = DistributionSpec::new(&s, HeightTuple(vec![3, 1])).unwrap();
        assert_eq!(invariant_distribution(&s, &full).unwrap().len(), s.dim());
        let zero = DistributionSpec::new(&s, HeightTuple(vec![0, 0])).unwrap();
        assert!(invariant_distribution(&s, &zero).unwrap().is_empty());
        assert!(integrability_verdict(&s, &zero).unwrap().integrable());
        assert!(matches!(
            DistributionSpec::new(&s, HeightTuple(vec![0, 1])),
            Err(TurielError::TupleViolatesConstraints { .. })
        ));
    }

    #[test]
    fn small_kernel_is_not_integrable() {
        let s = sig(&[1, 1]);
        let d = DistributionSpec::ker_im(&s, 1, 0).unwrap();
        assert_eq!(d.tuple().0, vec![1, 1]);
        let gens = invariant_distribution(&s, &d).unwrap();
        let ch = gens[0].chart().clone();
        let u = VectorField::parse(&ch, &[("x2_1", "1"), ("y1_1", "(-3*y2_1)/(x1_1 + 2)")]).unwrap();
        let v = VectorField::parse(&ch, &[("y2_1", "1"), ("y1_1", "(-x2_1)/(x1_1 + 2)")]).unwrap();
        assert!(gens.contains(&u) && gens.contains(&v));
        let verdict = integrability_verdict(&s, &d).unwrap();
        assert!(!verdict.integrable() && !verdict.predicted_integrable);
        let w = verdict.paper_witness.unwrap();
        assert_eq!(w.bracket, VectorField::parse(&ch, &[("y1_1", "(2)/(x1_1 + 2)")]).unwrap());
        assert!(w.matches_formula && w.outside_span);
    }

    #[test]
    fn single_block_and_image() {
        for d in DistributionSpec::all(&sig(&[2])) {
            assert!(integrability_verdict(&sig(&[2]), &d).unwrap().integrable());
        }
        let s = sig(&[2, 1]);
        let im = DistributionSpec::ker_im(&s, s.dim(), 1).unwrap();
        assert_eq!(im.tuple().0, vec![2, 0]);
        let v = integrability_verdict(&s, &im).unwrap();
        assert!(v.integrable() && v.agrees());
    }

    #[test]
    fn lemma_matches_kernel_image() {
        let s = sig(&[1, 1]);
        for (k, l) in [(1, 0), (0, 0), (s.dim(), 0), (1, 1), (2, 0)] {
            let d = DistributionSpec::ker_im(&s, k, l).unwrap();
            let lemma = invariant_distribution(&s, &d).unwrap();
            assert!(spans_equal(&lemma, &ker_im_distribution(&s, k, l)).unwrap(), "k={k} l={l}");
        }
    }
}
