//! Identity checks on the normal form of a signature.

use serde::Serialize;

use crate::exactalg::{Field, Matrix, RatFunc};
use crate::geometry::{compatibility_check, operator_field, VectorField};
use crate::jk::{canonical_pencil, JKBlockSpec};

use super::{build_normal_form, endomorphism_field, frames, gamma, TurielError, TurielSignature};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormChecks {
    pub nondegenerate0: bool,
    pub closed0: bool,
    pub closed1: bool,
    pub nijenhuis_zero: bool,
    /// `ω₀⁻¹ω₁` equals the closed-form operator entrywise.
    pub endomorphism_matches: bool,
}

impl FormChecks {
    pub fn all(&self) -> bool {
        self.nondegenerate0 && self.closed0 && self.closed1 && self.nijenhuis_zero && self.endomorphism_matches
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameChecks {
    /// Gram matrix of `ω₀` on the frame is the canonical `B`.
    pub gram_omega0: bool,
    /// Gram matrix of `ω₁` is the canonical `A + λB` for nilpotent blocks.
    pub gram_omega1: bool,
    /// `P − λE` shifts every e-chain down and every f-chain up.
    pub chains: bool,
    pub gamma1_zero: bool,
}

impl FrameChecks {
    pub fn all(&self) -> bool {
        self.gram_omega0 && self.gram_omega1 && self.chains && self.gamma1_zero
    }
}

pub fn check_forms(sig: &TurielSignature) -> Result<FormChecks, TurielError> {
    let st = build_normal_form(sig);
    let r = compatibility_check(&st.omega0, &st.omega1)?;
    let endomorphism_matches = r.nondegenerate0 && operator_field(&st.omega0, &st.omega1)? == endomorphism_field(sig);
    Ok(FormChecks {
        nondegenerate0: r.nondegenerate0,
        closed0: r.closed0,
        closed1: r.closed1,
        nijenhuis_zero: r.nijenhuis_zero,
        endomorphism_matches,
    })
}

fn gram(m: &Matrix<RatFunc>, v: &[VectorField]) -> Matrix<RatFunc> {
    Matrix::from_fn(v.len(), v.len(), |i, j| m.bilinear(v[i].components(), v[j].components()))
}

pub fn check_frames(sig: &TurielSignature) -> FrameChecks {
    let st = build_normal_form(sig);
    let fr = frames(sig);
    let v = fr.ordered();
    let blocks: Vec<JKBlockSpec> = sig.block_sizes().into_iter().map(|k| JKBlockSpec::jordan(0, k)).collect();
    let canon = canonical_pencil(&blocks).expect("nilpotent blocks");
    let lam = RatFunc::var(sig.dim() - 1);
    let b = canon.b.map(|q| RatFunc::constant(q.clone()));
    let a = canon.a.map(|q| RatFunc::constant(q.clone())).add(&b.scale(&lam));

    let n = endomorphism_field(sig).shift(&lam);
    let down = |c: &[VectorField]| {
        c.windows(2).all(|w| n.apply(&w[0]).ok().as_ref() == Some(&w[1]))
            && c.last().is_none_or(|l| n.apply(l).is_ok_and(|x| x.is_zero()))
    };
    let up = |c: &[VectorField]| {
        c.windows(2).all(|w| n.apply(&w[1]).ok().as_ref() == Some(&w[0]))
            && c.first().is_none_or(|f| n.apply(f).is_ok_and(|x| x.is_zero()))
    };
    let chains = down(&fr.big_e) && up(&fr.big_f) && fr.small.iter().all(|(e, f)| down(e) && up(f));
    FrameChecks {
        gram_omega0: gram(&st.omega0.matrix(), &v) == b,
        gram_omega1: gram(&st.omega1.matrix(), &v) == a,
        chains,
        gamma1_zero: gamma(sig, 1).is_zero(),
    }
}
