use std::collections::BTreeMap;

use crate::exactalg::{Field, Matrix, RatFunc};

use super::{Chart, GeomError, OperatorField, VectorField};

/// A `d`-form `Σ_{i₁<…<i_d} f_I dx_{i₁}∧…∧dx_{i_d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    chart: Chart,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, RatFunc>,
}

/// Sorts `idx` in place; returns the permutation sign, or `None` on a repeat.
fn normalize(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

impl DiffForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DiffForm { chart: chart.clone(), degree, coeffs: BTreeMap::new() }
    }

    pub fn from_function(chart: &Chart, f: RatFunc) -> Self {
        let mut w = Self::zero(chart, 0);
        w.add_term(&[], &f).unwrap();
        w
    }

    pub fn function(chart: &Chart, expr: &str) -> Result<Self, GeomError> {
        let f = RatFunc::parse(expr, chart.names()).map_err(|e| GeomError::Parse(e.to_string()))?;
        Ok(Self::from_function(chart, f))
    }

    /// `dx_i`.
    pub fn dx(chart: &Chart, i: usize) -> Self {
        let mut w = Self::zero(chart, 1);
        w.add_term(&[i], &RatFunc::one()).unwrap();
        w
    }

    /// Sum of `coef · dx_{a}∧dx_{b}∧…` with coordinates given by name.
    pub fn parse(chart: &Chart, degree: usize, terms: &[(&[&str], &str)]) -> Result<Self, GeomError> {
        let mut w = Self::zero(chart, degree);
        for (names, coef) in terms {
            let idx = names
                .iter()
                .map(|n| chart.index_of(n).ok_or_else(|| GeomError::UnknownName(n.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let f = RatFunc::parse(coef, chart.names()).map_err(|e| GeomError::Parse(e.to_string()))?;
            w.add_term(&idx, &f)?;
        }
        Ok(w)
    }

    /// Adds `f · dx_{idx}` for indices in any order.
    pub fn add_term(&mut self, idx: &[usize], f: &RatFunc) -> Result<(), GeomError> {
        if idx.len() != self.degree || idx.iter().any(|&i| i >= self.chart.dim()) {
            return Err(GeomError::BadIndex(idx.to_vec()));
        }
        let mut key = idx.to_vec();
        let Some(odd) = normalize(&mut key) else { return Ok(()) };
        if f.is_zero() {
            return Ok(());
        }
        let f = if odd { f.neg() } else { f.clone() };
        let entry = self.coeffs.entry(key).or_insert_with(RatFunc::zero);
        *entry = entry.add(&f);
        if entry.is_zero() {
            self.coeffs.retain(|_, c| !c.is_zero());
        }
        Ok(())
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &RatFunc)> {
        self.coeffs.iter()
    }

    /// Coefficient of a strictly increasing index tuple.
    pub fn coefficient(&self, idx: &[usize]) -> RatFunc {
        self.coeffs.get(idx).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((&self.chart, self.degree), (&other.chart, other.degree), "adding incompatible forms");
        let mut w = self.clone();
        for (k, c) in &other.coeffs {
            w.add_term(k, c).unwrap();
        }
        w
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RatFunc::one().neg()))
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c.mul(f))).filter(|(_, c)| !c.is_zero()).collect();
        DiffForm { chart: self.chart.clone(), degree: self.degree, coeffs }
    }

    /// Skew coefficient matrix of a 2-form: `M_ij = f_ij`, `M_ji = −f_ij`.
    pub fn matrix(&self) -> Matrix<RatFunc> {
        assert_eq!(self.degree, 2, "coefficient matrix of a non-2-form");
        let n = self.chart.dim();
        let mut m = Matrix::zeros(n, n);
        for (k, c) in &self.coeffs {
            m[(k[0], k[1])] = c.clone();
            m[(k[1], k[0])] = c.neg();
        }
        m
    }

    /// 2-form with the strict upper triangle of `m`.
    pub fn from_matrix(chart: &Chart, m: &Matrix<RatFunc>) -> Self {
        let n = chart.dim();
        let mut w = Self::zero(chart, 2);
        for i in 0..n {
            for j in i + 1..n {
                w.add_term(&[i, j], &m[(i, j)]).unwrap();
            }
        }
        w
    }

    /// Same form on another chart, variable `i` renamed to `map[i]`.
    pub fn transport(&self, chart: &Chart, map: &[usize]) -> Self {
        let mut w = Self::zero(chart, self.degree);
        for (k, c) in &self.coeffs {
            let idx: Vec<usize> = k.iter().map(|&i| map[i]).collect();
            w.add_term(&idx, &c.remap_vars(map)).unwrap();
        }
        w
    }

    /// `{"a,b": "coefficient", ...}` keyed by comma-joined coordinate names.
    pub fn to_json(&self) -> serde_json::Value {
        let names = self.chart.names();
        let m: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let key: Vec<&str> = k.iter().map(|&i| names[i].as_str()).collect();
                (key.join(","), c.format(names).into())
            })
            .collect();
        m.into()
    }
}

pub fn wedge(a: &DiffForm, b: &DiffForm) -> Result<DiffForm, GeomError> {
    if a.chart != b.chart {
        return Err(GeomError::ChartMismatch);
    }
    let mut w = DiffForm::zero(&a.chart, a.degree + b.degree);
    for (ka, ca) in &a.coeffs {
        for (kb, cb) in &b.coeffs {
            let idx: Vec<usize> = ka.iter().chain(kb).copied().collect();
            w.add_term(&idx, &ca.mul(cb))?;
        }
    }
    Ok(w)
}

/// `d(f dx_I) = Σ_j ∂f/∂x_j dx_j∧dx_I`, for degree at most two.
pub fn exterior_derivative(w: &DiffForm) -> Result<DiffForm, GeomError> {
    if w.degree >= 3 {
        return Err(GeomError::DegreeTooHigh(w.degree));
    }
    let mut out = DiffForm::zero(&w.chart, w.degree + 1);
    for (k, c) in &w.coeffs {
        for j in 0..w.chart.dim() {
            if k.contains(&j) {
                continue;
            }
            let d = c.derivative(j);
            if d.is_zero() {
                continue;
            }
            let mut idx = vec![j];
            idx.extend_from_slice(k);
            out.add_term(&idx, &d)?;
        }
    }
    Ok(out)
}

/// `P = ω₀⁻¹ω₁`, so that `ω₀(X, PY) = ω₁(X, Y)`.
pub fn operator_field(w0: &DiffForm, w1: &DiffForm) -> Result<OperatorField, GeomError> {
    if w0.chart != w1.chart {
        return Err(GeomError::ChartMismatch);
    }
    if w0.degree != 2 || w1.degree != 2 {
        return Err(GeomError::DegenerateForm);
    }
    let inv = w0.matrix().inverse().ok_or(GeomError::DegenerateForm)?;
    OperatorField::new(&w0.chart, inv.mul(&w1.matrix()))
}

/// The field `X_H` with `ω(X_H, ·) = dH`.
pub fn hamiltonian_field(w: &DiffForm, h: &RatFunc) -> Result<VectorField, GeomError> {
    if w.degree != 2 {
        return Err(GeomError::DegenerateForm);
    }
    let n = w.chart.dim();
    let m = w.matrix();
    if m.rank() < n {
        return Err(GeomError::DegenerateForm);
    }
    let dh: Vec<RatFunc> = (0..n).map(|j| h.derivative(j)).collect();
    let x = m.neg().solve(&dh).ok_or(GeomError::DegenerateForm)?;
    VectorField::new(&w.chart, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Chart {
        Chart::new(["x", "y", "z", "l"]).unwrap()
    }

    #[test]
    fn derivative_examples() {
        let c = c4();
        let xdy = DiffForm::parse(&c, 1, &[(&["y"], "x")]).unwrap();
        let dxdy = DiffForm::parse(&c, 2, &[(&["x", "y"], "1")]).unwrap();
        assert_eq!(exterior_derivative(&xdy).unwrap(), dxdy);
        assert!(exterior_derivative(&dxdy).unwrap().is_zero());
        let w0 = DiffForm::parse(&c, 2, &[(&["x", "y"], "1"), (&["z", "l"], "1")]).unwrap();
        let lw0 = w0.scale(&DiffForm::function(&c, "l").unwrap().coefficient(&[]));
        let expect = DiffForm::parse(&c, 3, &[(&["l", "x", "y"], "1")]).unwrap();
        assert_eq!(exterior_derivative(&lw0).unwrap(), expect);
        let three = DiffForm::parse(&c, 3, &[(&["x", "y", "z"], "l")]).unwrap();
        assert_eq!(exterior_derivative(&three), Err(GeomError::DegreeTooHigh(3)));
    }

    #[test]
    fn antisymmetric_storage() {
        let c = c4();
        let w = DiffForm::parse(&c, 2, &[(&["y", "x"], "1"), (&["z", "z"], "5")]).unwrap();
        assert_eq!(w.coefficient(&[0, 1]), RatFunc::one().neg());
        assert_eq!(w.terms().count(), 1);
        let dx = DiffForm::dx(&c, 0);
        assert!(wedge(&dx, &dx).unwrap().is_zero());
    }

    #[test]
    fn operator_examples() {
        let c = c4();
        let w0 = DiffForm::parse(&c, 2, &[(&["x", "y"], "1"), (&["z", "l"], "1")]).unwrap();
        let l = DiffForm::function(&c, "l").unwrap().coefficient(&[]);
        assert_eq!(operator_field(&w0, &w0).unwrap(), OperatorField::identity(&c));
        let p = operator_field(&w0, &w0.scale(&l)).unwrap();
        assert_eq!(p, OperatorField::identity(&c).scale(&l));
        // ω₀(X, PY) = ω₁(X, Y) on coordinate fields.
        let w1 = DiffForm::parse(&c, 2, &[(&["x", "l"], "y"), (&["y", "z"], "x*l")]).unwrap();
        let p = operator_field(&w0, &w1).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let x = VectorField::coord(&c, i);
                let py = p.apply(&VectorField::coord(&c, j)).unwrap();
                let lhs = w0.matrix().bilinear(x.components(), py.components());
                assert_eq!(lhs, w1.matrix()[(i, j)]);
            }
        }
        let degenerate = DiffForm::parse(&c, 2, &[(&["x", "y"], "1")]).unwrap();
        assert_eq!(operator_field(&degenerate, &w0), Err(GeomError::DegenerateForm));
    }

    #[test]
    fn hamiltonian_sign() {
        let c = c4();
        let w = DiffForm::parse(&c, 2, &[(&["x", "y"], "1"), (&["z", "l"], "1")]).unwrap();
        let h = RatFunc::parse("y", c.names()).unwrap();
        let x = hamiltonian_field(&w, &h).unwrap();
        assert_eq!(x, VectorField::coord(&c, 0));
        let y = VectorField::coord(&c, 1);
        assert_eq!(w.matrix().bilinear(x.components(), y.components()), RatFunc::one());
        let dl = DiffForm::parse(&c, 2, &[(&["x", "y"], "1")]).unwrap();
        assert_eq!(hamiltonian_field(&dl, &h), Err(GeomError::DegenerateForm));
    }
}
