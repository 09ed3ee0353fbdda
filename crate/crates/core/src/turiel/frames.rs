//! The frame in which both forms become canonical Jordan blocks.
//!
//! Big block: `e_1^0..e_1^{k_1}` and `f_1^0..f_1^{k_1}`; small blocks
//! `e_s^1..e_s^{k_s}`, `f_s^1..f_s^{k_s}`. With `D = ½x_1^1 + 1`:
//!
//! ```text
//! e_s^i = ∂x_s^i − (k_s+½)y_s^{k_s}/D · ∂y_1^{k_s−i+1} + α_s^i ∂z
//! f_s^i = ∂y_s^i − ½x_s^1/D · ∂y_1^i + β_s^i ∂z
//! e_1^0 = −∂λ + Σ_s Σ_j −(j+½)x_s^{j+1} ∂x_s^j + (j−½)y_s^{j−1} ∂y_s^j
//! e_1^i = Σ_s (½x_s^1 + δ_s1) ∂x_s^i − (k_s+½)y_s^{k_s} ∂y_s^{k_s−i+1} + γ_i ∂z
//! f_1^i = 1/D · ∂y_1^i + β_1^i ∂z,   f_1^0 = ∂z
//! ```

use crate::exactalg::{Field, RatFunc};
use crate::geometry::{Chart, VectorField};

use super::{delta, half, Coords, TurielSignature};

#[derive(Clone, Debug)]
pub struct Frames {
    pub chart: Chart,
    /// `e_1^0..e_1^{k_1}`.
    pub big_e: Vec<VectorField>,
    /// `f_1^0..f_1^{k_1}`.
    pub big_f: Vec<VectorField>,
    /// For `s = 2..n`: `(e_s^1..e_s^{k_s}, f_s^1..f_s^{k_s})`.
    pub small: Vec<(Vec<VectorField>, Vec<VectorField>)>,
}

impl Frames {
    /// `e_1^0, …, f_1^{k_1}, e_2^1, …, f_n^{k_n}`: e-chain then f-chain per
    /// block, biggest block first.
    pub fn ordered(&self) -> Vec<VectorField> {
        let mut out: Vec<VectorField> = self.big_e.iter().chain(&self.big_f).cloned().collect();
        for (e, f) in &self.small {
            out.extend(e.iter().cloned());
            out.extend(f.iter().cloned());
        }
        out
    }
}

pub(crate) struct Builder {
    pub(crate) c: Coords,
    pub(crate) chart: Chart,
}

impl Builder {
    pub(crate) fn new(sig: &TurielSignature) -> Self {
        let c = Coords::new(sig);
        let chart = c.chart();
        Builder { c, chart }
    }

    pub(crate) fn field(&self, terms: &[(Option<usize>, RatFunc)]) -> VectorField {
        let mut comps = vec![RatFunc::zero(); self.chart.dim()];
        for (idx, f) in terms {
            if let Some(i) = idx {
                comps[*i] = comps[*i].add(f);
            }
        }
        VectorField::new(&self.chart, comps).unwrap()
    }

    /// `½x_1^1 + 1`.
    pub(crate) fn d(&self) -> RatFunc {
        half(1).mul(&self.c.xf(1, 1)).add(&RatFunc::one())
    }

    /// `(k_s+½) y_s^{k_s} / D`.
    pub(crate) fn u_coef(&self, s: usize) -> RatFunc {
        let k = self.c.k(s) as i64;
        half(2 * k + 1).mul(&self.c.yf(s, k)).mul(&self.d().inv())
    }

    /// `½ x_s^1 / D`.
    pub(crate) fn v_coef(&self, s: usize) -> RatFunc {
        half(1).mul(&self.c.xf(s, 1)).mul(&self.d().inv())
    }

    fn alpha(&self, s: usize, i: i64) -> RatFunc {
        let c = &self.c;
        let k = c.k(s) as i64;
        let tail = half(2 * k - 2 * i + 3).mul(&c.xf(1, k - i + 2)).add(&delta(i as usize, (k + 1) as usize));
        half(2 * i - 1).mul(&c.yf(s, i - 1)).sub(&self.u_coef(s).mul(&tail))
    }

    fn beta(&self, s: usize, i: i64) -> RatFunc {
        let c = &self.c;
        let tail = half(2 * i + 1).mul(&c.xf(1, i + 1)).add(&delta(i as usize, 0));
        half(2 * i + 1).mul(&c.xf(s, i + 1)).sub(&self.v_coef(s).mul(&tail))
    }

    pub(crate) fn gamma(&self, i: i64) -> RatFunc {
        let c = &self.c;
        (1..=c.n()).fold(RatFunc::zero(), |acc, s| {
            let k = c.k(s) as i64;
            let a = half(1).mul(&c.xf(s, 1)).add(&delta(s, 1)).mul(&half(2 * i - 1)).mul(&c.yf(s, i - 1));
            let b = half(2 * k + 1).mul(&c.yf(s, k)).mul(&half(2 * k - 2 * i + 3)).mul(&c.xf(s, k - i + 2));
            acc.add(&a).sub(&b)
        })
    }

    fn beta1(&self, i: i64) -> RatFunc {
        let tail = half(2 * i + 1).mul(&self.c.xf(1, i + 1)).add(&delta(i as usize, 0));
        self.d().inv().mul(&tail)
    }

    pub(crate) fn small_e(&self, s: usize, i: i64) -> VectorField {
        let c = &self.c;
        let k = c.k(s) as i64;
        self.field(&[
            (c.x(s, i), RatFunc::one()),
            (c.y(1, k - i + 1), self.u_coef(s).neg()),
            (Some(c.z()), self.alpha(s, i)),
        ])
    }

    pub(crate) fn small_f(&self, s: usize, i: i64) -> VectorField {
        let c = &self.c;
        self.field(&[(c.y(s, i), RatFunc::one()), (c.y(1, i), self.v_coef(s).neg()), (Some(c.z()), self.beta(s, i))])
    }

    pub(crate) fn big_e(&self, i: i64) -> VectorField {
        let c = &self.c;
        let mut terms = Vec::new();
        if i == 0 {
            terms.push((Some(c.lam()), RatFunc::one().neg()));
            for s in 1..=c.n() {
                for j in 1..=c.k(s) as i64 {
                    terms.push((c.x(s, j), half(2 * j + 1).mul(&c.xf(s, j + 1)).neg()));
                    terms.push((c.y(s, j), half(2 * j - 1).mul(&c.yf(s, j - 1))));
                }
            }
        } else {
            for s in 1..=c.n() {
                let k = c.k(s) as i64;
                terms.push((c.x(s, i), half(1).mul(&c.xf(s, 1)).add(&delta(s, 1))));
                terms.push((c.y(s, k - i + 1), half(2 * k + 1).mul(&c.yf(s, k)).neg()));
            }
            terms.push((Some(c.z()), self.gamma(i)));
        }
        self.field(&terms)
    }

    pub(crate) fn big_f(&self, i: i64) -> VectorField {
        let c = &self.c;
        if i == 0 {
            return self.field(&[(Some(c.z()), RatFunc::one())]);
        }
        self.field(&[(c.y(1, i), self.d().inv()), (Some(c.z()), self.beta1(i))])
    }
}

/// The frame fields, each written out from its closed form.
pub fn frames(sig: &TurielSignature) -> Frames {
    let b = Builder::new(sig);
    let k1 = sig.ks()[0] as i64;
    let small = (2..=sig.n())
        .map(|s| {
            let k = sig.ks()[s - 1] as i64;
            ((1..=k).map(|i| b.small_e(s, i)).collect(), (1..=k).map(|i| b.small_f(s, i)).collect())
        })
        .collect();
    Frames {
        big_e: (0..=k1).map(|i| b.big_e(i)).collect(),
        big_f: (0..=k1).map(|i| b.big_f(i)).collect(),
        small,
        chart: b.chart,
    }
}
