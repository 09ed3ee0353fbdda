//! Vector fields, differential forms and operator fields on a coordinate
//! chart, with coefficients in the field of rational functions of the
//! coordinates.

mod field;
mod form;
mod frobenius;

use std::fmt;
use std::sync::Arc;

use crate::exactalg::{Matrix, Rational};
use crate::jk::{jk_invariants, JKInvariants, JkError, Mode};
use crate::pencil::{PencilError, SkewPencil};

pub use field::{lie_bracket, nijenhuis, nijenhuis_vanishes, OperatorField, VectorField};
pub use form::{exterior_derivative, hamiltonian_field, operator_field, wedge, DiffForm};
pub(crate) use frobenius::SpanTest;
pub use frobenius::{involutivity_check, spans_equal, Involutivity};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("exterior derivative of a {0}-form is not supported")]
    DegreeTooHigh(usize),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("a coefficient has a pole at the given point")]
    PoleAtPoint,
    #[error("generators are dependent: rank {rank} for {count} fields")]
    DependentGenerators { rank: usize, count: usize },
    #[error("duplicate coordinate name {0:?}")]
    DuplicateName(String),
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown coordinate {0:?}")]
    UnknownName(String),
    #[error("cannot parse coefficient: {0}")]
    Parse(String),
    #[error("bad index tuple {0:?}")]
    BadIndex(Vec<usize>),
    #[error(transparent)]
    Jk(#[from] JkError),
}

impl From<PencilError> for GeomError {
    fn from(e: PencilError) -> Self {
        GeomError::Jk(e.into())
    }
}

/// Ordered coordinate names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Arc<Vec<String>>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart{:?}", self.names)
    }
}

impl Chart {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, GeomError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(GeomError::DuplicateName(n.clone()));
            }
        }
        Ok(Chart { names: Arc::new(names) })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Charts side by side; fails on a shared name.
    pub fn concat(parts: &[Chart]) -> Result<Chart, GeomError> {
        Chart::new(parts.iter().flat_map(|c| c.names.iter().cloned()))
    }
}

/// Outcome of [`compatibility_check`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CompatibilityReport {
    pub nondegenerate0: bool,
    pub closed0: bool,
    pub closed1: bool,
    pub nijenhuis_zero: bool,
}

impl CompatibilityReport {
    pub fn all(&self) -> bool {
        self.nondegenerate0 && self.closed0 && self.closed1 && self.nijenhuis_zero
    }
}

/// Closedness of both forms, non-degeneracy of `ω₀` and vanishing of the
/// Nijenhuis torsion of `ω₀⁻¹ω₁`.
pub fn compatibility_check(w0: &DiffForm, w1: &DiffForm) -> Result<CompatibilityReport, GeomError> {
    if w0.chart() != w1.chart() {
        return Err(GeomError::ChartMismatch);
    }
    let closed = |w: &DiffForm| exterior_derivative(w).map(|d| d.is_zero());
    let closed0 = closed(w0)?;
    let closed1 = closed(w1)?;
    let (nondegenerate0, nijenhuis_zero) = match operator_field(w0, w1) {
        Ok(p) => (true, nijenhuis_vanishes(&p)),
        Err(GeomError::DegenerateForm) => (false, false),
        Err(e) => return Err(e),
    };
    Ok(CompatibilityReport { nondegenerate0, closed0, closed1, nijenhuis_zero })
}

/// JK invariants of the pencil `(ω₁, ω₀)` frozen at a point.
pub fn jk_invariants_at_point(w0: &DiffForm, w1: &DiffForm, point: &[Rational]) -> Result<JKInvariants, GeomError> {
    if w0.chart() != w1.chart() {
        return Err(GeomError::ChartMismatch);
    }
    let n = w0.chart().dim();
    if point.len() != n {
        return Err(GeomError::WrongLength { expected: n, got: point.len() });
    }
    let at = |m: Matrix<crate::exactalg::RatFunc>| -> Result<Matrix<Rational>, GeomError> {
        m.try_map(|f| f.eval(point).ok_or(GeomError::PoleAtPoint))
    };
    let a = at(w1.matrix())?;
    let b = at(w0.matrix())?;
    let p = SkewPencil::new(a, b)?;
    Ok(jk_invariants(&p, Mode::Complex)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::pencil::EigenvalueClass;

    fn chart(n: &[&str]) -> Chart {
        Chart::new(n.iter().copied()).unwrap()
    }

    #[test]
    fn chart_names_unique() {
        assert!(Chart::new(["x", "y", "x"]).is_err());
        assert_eq!(chart(&["x", "y"]).index_of("y"), Some(1));
    }

    #[test]
    fn compatibility_examples() {
        let c = chart(&["x", "y", "z", "l"]);
        let w0 = DiffForm::parse(&c, 2, &[(&["x", "y"], "1"), (&["z", "l"], "1")]).unwrap();
        let w1 = w0.scale(&DiffForm::function(&c, "l").unwrap().coefficient(&[]));
        let r = compatibility_check(&w0, &w1).unwrap();
        assert!(r.nondegenerate0 && r.closed0);
        // d(λω₀) = dλ∧dx∧dy is not zero.
        assert!(!r.closed1);

        let c2 = chart(&["x", "y"]);
        let w0 = DiffForm::parse(&c2, 2, &[(&["x", "y"], "1")]).unwrap();
        let w1 = DiffForm::parse(&c2, 2, &[(&["x", "y"], "x")]).unwrap();
        assert!(compatibility_check(&w0, &w1).unwrap().all());

        let c3 = chart(&["x", "y", "z"]);
        let w1 = DiffForm::parse(&c3, 2, &[(&["y", "z"], "x")]).unwrap();
        let r = compatibility_check(&w1, &w1).unwrap();
        assert!(!r.nondegenerate0);
    }

    #[test]
    fn invariants_at_points() {
        let c = chart(&["x", "y"]);
        let w0 = DiffForm::parse(&c, 2, &[(&["x", "y"], "1")]).unwrap();
        let w1 = DiffForm::parse(&c, 2, &[(&["x", "y"], "x")]).unwrap();
        let inv = jk_invariants_at_point(&w0, &w1, &[rat(3), rat(5)]).unwrap();
        assert_eq!(
            inv.jordan_sizes().into_iter().collect::<Vec<_>>(),
            vec![(EigenvalueClass::Finite(rat(3)), vec![1])]
        );
        let w1 = DiffForm::parse(&c, 2, &[(&["x", "y"], "(1)/(x)")]).unwrap();
        assert_eq!(jk_invariants_at_point(&w0, &w1, &[rat(0), rat(1)]), Err(GeomError::PoleAtPoint));
    }
}
