//! Direct products of structures with coprime characteristic polynomials.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactalg::rational::{format_rational, parse_rational};
use crate::exactalg::{Field, Matrix, MultiPoly, RatFunc};
use crate::geometry::{involutivity_check, operator_field, Chart, DiffForm, GeomError, VectorField};
use crate::invsub::{direct_sum_subspace, enumerate_invariant_subspaces, HeightTuple};
use crate::jk::{JKBlockSpec, JKInvariants};
use crate::pencil::EigenvalueClass;

use super::{
    build_flat, build_normal_form, integrability_verdict, invariant_distribution, DistributionSpec, FlatSpec,
    Structure, TurielError, TurielSignature,
};

/// `det(t·E − P)` with `P = ω₀⁻¹ω₁`, variables renamed by `map` and `t`
/// placed at variable index `t`.
pub fn char_poly_field(st: &Structure, map: &[usize], t: usize) -> Result<RatFunc, TurielError> {
    let p = operator_field(&st.omega0, &st.omega1)?;
    let n = st.chart.dim();
    let tv = RatFunc::var(t);
    let m = Matrix::from_fn(n, n, |i, j| {
        let e = p.matrix()[(i, j)].remap_vars(map).neg();
        if i == j {
            e.add(&tv)
        } else {
            e
        }
    });
    Ok(m.det())
}

/// Sylvester resultant of two polynomials in variable `t`.
pub fn resultant_in(f: &MultiPoly, g: &MultiPoly, t: usize) -> RatFunc {
    let fc = f.coeffs_in(t);
    let gc = g.coeffs_in(t);
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    if m + n == 0 {
        return RatFunc::one();
    }
    let size = m + n;
    let mut s = Matrix::<RatFunc>::zeros(size, size);
    // Coefficients are stored lowest degree first.
    for r in 0..n {
        for (d, c) in fc.iter().enumerate() {
            s[(r, r + m - d)] = c.clone().into();
        }
    }
    for r in 0..m {
        for (d, c) in gc.iter().enumerate() {
            s[(n + r, r + n - d)] = c.clone().into();
        }
    }
    s.det()
}

/// Charts side by side with forms extended by zero. Fails on a shared name
/// or when two characteristic polynomials have a common factor.
pub fn product_build(components: &[Structure]) -> Result<Structure, TurielError> {
    let charts: Vec<Chart> = components.iter().map(|c| c.chart.clone()).collect();
    let chart = Chart::concat(&charts).map_err(|e| match e {
        GeomError::DuplicateName(n) => TurielError::NameClash(n),
        other => other.into(),
    })?;
    let total = chart.dim();
    let maps = offsets_maps(components);
    let mut w0 = DiffForm::zero(&chart, 2);
    let mut w1 = DiffForm::zero(&chart, 2);
    let mut chis = Vec::new();
    for (c, map) in components.iter().zip(&maps) {
        w0 = w0.add(&c.omega0.transport(&chart, map));
        w1 = w1.add(&c.omega1.transport(&chart, map));
        chis.push(char_poly_field(c, map, total)?);
    }
    for i in 0..chis.len() {
        for j in i + 1..chis.len() {
            if resultant_in(chis[i].num(), chis[j].num(), total).is_zero() {
                return Err(TurielError::NonCoprimeFactors(i, j));
            }
        }
    }
    Ok(Structure { chart, omega0: w0, omega1: w1 })
}

fn offsets_maps(components: &[Structure]) -> Vec<Vec<usize>> {
    let mut off = 0;
    components
        .iter()
        .map(|c| {
            let n = c.chart.dim();
            let m = (off..off + n).collect();
            off += n;
            m
        })
        .collect()
}

/// Generators given per component, moved into the product chart.
pub fn product_distribution(
    components: &[Structure],
    product: &Structure,
    parts: &[Vec<VectorField>],
) -> Vec<VectorField> {
    offsets_maps(components)
        .iter()
        .zip(parts)
        .flat_map(|(map, fields)| fields.iter().map(move |f| f.transport(&product.chart, map)))
        .collect()
}

/// Constant fields spanning the direct sum, over the eigenvalue classes, of
/// the subspaces with the given tuples (one per class, in class order).
pub fn flat_distribution(
    f: &FlatSpec,
    st: &Structure,
    tuples: &[HeightTuple],
) -> Result<Vec<VectorField>, TurielError> {
    let classes = f.classes();
    let n = st.chart.dim();
    let mut out = Vec::new();
    let mut off = 0;
    for ((_, h), t) in classes.iter().zip(tuples) {
        if !t.satisfies(h) {
            return Err(TurielError::TupleViolatesConstraints { tuple: t.clone(), heights: h.heights().to_vec() });
        }
        let w = direct_sum_subspace(h, t).expect("tuple in range");
        for v in w.basis() {
            let mut comps = vec![RatFunc::zero(); n];
            for (i, q) in v.iter().enumerate() {
                comps[off + i] = RatFunc::constant(q.clone());
            }
            out.push(VectorField::new(&st.chart, comps)?);
        }
        off += h.dim();
    }
    Ok(out)
}

impl FlatSpec {
    /// Every choice of one admissible tuple per eigenvalue class.
    pub fn tuple_choices(&self) -> Vec<Vec<HeightTuple>> {
        self.classes().iter().fold(vec![Vec::new()], |acc, (_, h)| {
            let opts = enumerate_invariant_subspaces(h);
            acc.iter()
                .flat_map(|pre| {
                    opts.iter().map(move |t| {
                        let mut v = pre.clone();
                        v.push(t.clone());
                        v
                    })
                })
                .collect()
        })
    }
}

/// One factor of a product: a normal form, or constant Jordan data.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Turiel(TurielSignature),
    Flat(FlatSpec),
}

impl FromStr for Factor {
    type Err = TurielError;

    /// `turiel:2,1`, or `flat:0:2,1:1` for eigenvalue-size pairs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("turiel:") {
            return Ok(Factor::Turiel(rest.parse()?));
        }
        let Some(rest) = s.strip_prefix("flat:") else {
            return Err(TurielError::BadSignature(format!("{s:?}: expected turiel:K,... or flat:EIGENVALUE:SIZE,...")));
        };
        let blocks = rest
            .split(',')
            .map(|p| {
                let bad = || TurielError::NotFlat(format!("cannot parse block {p:?}"));
                let (l, k) = p.rsplit_once(':').ok_or_else(bad)?;
                let lambda = parse_rational(l.trim()).map_err(|_| bad())?;
                let size: usize = k.trim().parse().map_err(|_| bad())?;
                if size == 0 {
                    return Err(bad());
                }
                Ok(JKBlockSpec::Jordan { class: EigenvalueClass::Finite(lambda), size })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Factor::Flat(FlatSpec::new(JKInvariants::new(blocks))?))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Turiel(s) => {
                let ks: Vec<String> = s.ks().iter().map(usize::to_string).collect();
                write!(f, "turiel:{}", ks.join(","))
            }
            Factor::Flat(spec) => {
                let parts: Vec<String> = spec
                    .invariants()
                    .blocks
                    .iter()
                    .map(|b| match b {
                        JKBlockSpec::Jordan { class: EigenvalueClass::Finite(l), size } => {
                            format!("{}:{size}", format_rational(l))
                        }
                        _ => unreachable!("flat specs hold finite Jordan blocks"),
                    })
                    .collect();
                write!(f, "flat:{}", parts.join(","))
            }
        }
    }
}

/// An invariant distribution of one factor.
#[derive(Clone, Debug)]
pub struct FactorDistribution {
    pub label: String,
    pub fields: Vec<VectorField>,
    pub integrable: bool,
}

impl Factor {
    pub fn structure(&self) -> Structure {
        match self {
            Factor::Turiel(s) => build_normal_form(s),
            Factor::Flat(f) => build_flat(f),
        }
    }

    /// Every invariant distribution with its verdict, written on the chart of
    /// `st`, which must be `structure()` up to renaming.
    pub fn distributions(&self, st: &Structure) -> Result<Vec<FactorDistribution>, TurielError> {
        let id: Vec<usize> = (0..st.chart.dim()).collect();
        match self {
            Factor::Turiel(sig) => DistributionSpec::all(sig)
                .iter()
                .map(|d| {
                    let fields = invariant_distribution(sig, d)?.iter().map(|v| v.transport(&st.chart, &id)).collect();
                    let integrable = integrability_verdict(sig, d)?.integrable();
                    Ok(FactorDistribution { label: d.tuple().to_string(), fields, integrable })
                })
                .collect(),
            Factor::Flat(f) => {
                let classes = f.classes();
                f.tuple_choices()
                    .iter()
                    .map(|c| {
                        let fields = flat_distribution(f, st, c)?;
                        let integrable = involutivity_check(&fields)?.is_involutive();
                        let parts: Vec<String> =
                            classes.iter().zip(c).map(|((l, _), t)| format!("{}:{t}", format_rational(l))).collect();
                        Ok(FactorDistribution { label: parts.join(" "), fields, integrable })
                    })
                    .collect()
            }
        }
    }
}

/// One choice of distribution per factor and the verdict on their product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductRow {
    pub labels: Vec<String>,
    pub dimension: usize,
    pub components: Vec<bool>,
    pub computed: bool,
}

impl ProductRow {
    /// The product is involutive exactly when every factor is.
    pub fn agrees(&self) -> bool {
        self.computed == self.components.iter().all(|&b| b)
    }
}

#[derive(Clone, Debug)]
pub struct ProductReport {
    /// Factor structures, renamed with suffixes `_a`, `_b`, ….
    pub factors: Vec<Structure>,
    pub product: Structure,
    pub rows: Vec<ProductRow>,
}

/// Builds the product and checks every combination of factor distributions.
pub fn product_verdicts(factors: &[Factor]) -> Result<ProductReport, TurielError> {
    if factors.is_empty() || factors.len() > 26 {
        return Err(TurielError::BadSignature(format!("{} factors; expected 1 to 26", factors.len())));
    }
    let parts: Vec<Structure> = factors
        .iter()
        .enumerate()
        .map(|(i, f)| f.structure().renamed(&format!("_{}", (b'a' + i as u8) as char)))
        .collect();
    let product = product_build(&parts)?;
    let dists = factors.iter().zip(&parts).map(|(f, st)| f.distributions(st)).collect::<Result<Vec<_>, _>>()?;
    let combos = dists.iter().fold(vec![Vec::new()], |acc, ds| {
        acc.iter()
            .flat_map(|pre: &Vec<&FactorDistribution>| {
                ds.iter().map(move |d| {
                    let mut v = pre.clone();
                    v.push(d);
                    v
                })
            })
            .collect()
    });
    let rows = combos
        .par_iter()
        .map(|combo| {
            let fields: Vec<Vec<VectorField>> = combo.iter().map(|d| d.fields.clone()).collect();
            let gens = product_distribution(&parts, &product, &fields);
            Ok(ProductRow {
                labels: combo.iter().map(|d| d.label.clone()).collect(),
                dimension: gens.len(),
                components: combo.iter().map(|d| d.integrable).collect(),
                computed: involutivity_check(&gens)?.is_involutive(),
            })
        })
        .collect::<Result<Vec<_>, TurielError>>()?;
    Ok(ProductReport { factors: parts, product, rows })
}
