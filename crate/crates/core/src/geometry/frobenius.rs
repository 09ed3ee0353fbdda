use rayon::prelude::*;

use crate::exactalg::{Field, Matrix, RatFunc};

use super::{lie_bracket, GeomError, VectorField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Involutivity {
    Involutive,
    /// `[X_i, X_j]` leaves the span of the generators.
    Witness {
        i: usize,
        j: usize,
        bracket: VectorField,
    },
}

impl Involutivity {
    pub fn is_involutive(&self) -> bool {
        matches!(self, Involutivity::Involutive)
    }
}

/// Reduced row echelon form of a family of fields, for span membership.
pub(crate) struct SpanTest {
    rows: Vec<Vec<RatFunc>>,
    pivots: Vec<usize>,
}

impl SpanTest {
    pub(crate) fn new(fields: &[VectorField]) -> Result<Self, GeomError> {
        let count = fields.len();
        let n = fields.first().map_or(0, |f| f.chart().dim());
        let m = Matrix::from_fn(count, n, |r, c| fields[r].component(c).clone());
        let ech = m.echelon(true);
        let rank = ech.pivots.len();
        if rank < count {
            return Err(GeomError::DependentGenerators { rank, count });
        }
        let rows = (0..rank).map(|r| ech.reduced.row(r)).collect();
        Ok(SpanTest { rows, pivots: ech.pivots })
    }

    /// `v − Σ v[pivot_r]·row_r`, zero iff `v` lies in the span.
    pub(crate) fn residual(&self, v: &VectorField) -> Vec<RatFunc> {
        let mut out = v.components().to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.component(p).clone();
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = o.sub(&c.mul(r));
                }
            }
        }
        out
    }

    pub(crate) fn contains(&self, v: &VectorField) -> bool {
        self.residual(v).iter().all(Field::is_zero)
    }
}

/// Whether two independent families span the same module over the
/// rational functions.
pub fn spans_equal(a: &[VectorField], b: &[VectorField]) -> Result<bool, GeomError> {
    if a.len() != b.len() {
        return Ok(false);
    }
    if a.is_empty() {
        return Ok(true);
    }
    let span = SpanTest::new(a)?;
    SpanTest::new(b)?;
    Ok(b.iter().all(|v| span.contains(v)))
}

/// Frobenius test over the rational-function field: every pairwise bracket
/// must be a combination of the generators.
pub fn involutivity_check(fields: &[VectorField]) -> Result<Involutivity, GeomError> {
    if let Some(f) = fields.first() {
        if fields.iter().any(|g| g.chart() != f.chart()) {
            return Err(GeomError::ChartMismatch);
        }
    }
    let span = SpanTest::new(fields)?;
    let g = fields.len();
    let pairs: Vec<(usize, usize)> = (0..g).flat_map(|i| (i + 1..g).map(move |j| (i, j))).collect();
    let found = pairs.par_iter().find_map_first(|&(i, j)| {
        let b = lie_bracket(&fields[i], &fields[j]).unwrap();
        (!span.contains(&b)).then_some(Involutivity::Witness { i, j, bracket: b })
    });
    Ok(found.unwrap_or(Involutivity::Involutive))
}
