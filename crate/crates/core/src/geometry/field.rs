use rayon::prelude::*;

use crate::exactalg::{Field, Matrix, RatFunc};

use super::{Chart, GeomError};

/// `Σ X_i ∂/∂x_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    comps: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(chart: &Chart, comps: Vec<RatFunc>) -> Result<Self, GeomError> {
        if comps.len() != chart.dim() {
            return Err(GeomError::WrongLength { expected: chart.dim(), got: comps.len() });
        }
        Ok(VectorField { chart: chart.clone(), comps })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), comps: vec![RatFunc::zero(); chart.dim()] }
    }

    /// `∂/∂x_i`.
    pub fn coord(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.comps[i] = RatFunc::one();
        v
    }

    /// Parses `name ↦ coefficient` pairs; unnamed components are zero.
    pub fn parse(chart: &Chart, terms: &[(&str, &str)]) -> Result<Self, GeomError> {
        let mut v = Self::zero(chart);
        for (name, coef) in terms {
            let i = chart.index_of(name).ok_or_else(|| GeomError::UnknownName(name.to_string()))?;
            let f = RatFunc::parse(coef, chart.names()).map_err(|e| GeomError::Parse(e.to_string()))?;
            v.comps[i] = v.comps[i].add(&f);
        }
        Ok(v)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &RatFunc {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Field::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        VectorField { chart: self.chart.clone(), comps: self.comps.iter().map(|c| c.mul(f)).collect() }
    }

    fn zip(&self, other: &Self, op: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Self {
        assert_eq!(self.chart, other.chart, "vector fields on different charts");
        VectorField {
            chart: self.chart.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect(),
        }
    }

    /// Derivative of a function along the field.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        self.comps.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold(RatFunc::zero(), |acc, (j, c)| {
            let d = f.derivative(j);
            if d.is_zero() {
                acc
            } else {
                acc.add(&c.mul(&d))
            }
        })
    }

    /// Components at a point, `None` on a pole.
    pub fn eval(&self, point: &[crate::exactalg::Rational]) -> Option<Vec<crate::exactalg::Rational>> {
        self.comps.iter().map(|c| c.eval(point)).collect()
    }

    /// Same components on another chart, variable `i` renamed to `map[i]`.
    pub fn transport(&self, chart: &Chart, map: &[usize]) -> Self {
        let mut v = Self::zero(chart);
        for (i, c) in self.comps.iter().enumerate() {
            v.comps[map[i]] = c.remap_vars(map);
        }
        v
    }

    /// `{"name": "coefficient", ...}` over the nonzero components.
    pub fn to_json(&self) -> serde_json::Value {
        let names = self.chart.names();
        let m: serde_json::Map<String, serde_json::Value> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (names[i].clone(), c.format(names).into()))
            .collect();
        m.into()
    }

    pub fn format(&self) -> String {
        let names = self.chart.names();
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})·∂{}", c.format(names), names[i]))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `[X, Y]_i = Σ_j X_j ∂Y_i/∂x_j − Y_j ∂X_i/∂x_j`.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField, GeomError> {
    if x.chart != y.chart {
        return Err(GeomError::ChartMismatch);
    }
    let comps = (0..x.chart.dim()).map(|i| x.apply(&y.comps[i]).sub(&y.apply(&x.comps[i]))).collect();
    Ok(VectorField { chart: x.chart.clone(), comps })
}

/// Field of endomorphisms, acting on vector fields by matrix product.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorField {
    chart: Chart,
    m: Matrix<RatFunc>,
}

impl OperatorField {
    pub fn new(chart: &Chart, m: Matrix<RatFunc>) -> Result<Self, GeomError> {
        if m.rows() != chart.dim() || m.cols() != chart.dim() {
            return Err(GeomError::WrongLength { expected: chart.dim(), got: m.rows() });
        }
        Ok(OperatorField { chart: chart.clone(), m })
    }

    pub fn identity(chart: &Chart) -> Self {
        OperatorField { chart: chart.clone(), m: Matrix::identity(chart.dim()) }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &Matrix<RatFunc> {
        &self.m
    }

    pub fn apply(&self, x: &VectorField) -> Result<VectorField, GeomError> {
        if x.chart != self.chart {
            return Err(GeomError::ChartMismatch);
        }
        let n = self.chart.dim();
        let comps = (0..n)
            .map(|i| {
                (0..n).fold(RatFunc::zero(), |acc, j| {
                    let (a, b) = (&self.m[(i, j)], &x.comps[j]);
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc.add(&a.mul(b))
                    }
                })
            })
            .collect();
        Ok(VectorField { chart: self.chart.clone(), comps })
    }

    /// `P − f·E`.
    pub fn shift(&self, f: &RatFunc) -> Self {
        let n = self.chart.dim();
        let mut m = self.m.clone();
        for i in 0..n {
            m[(i, i)] = m[(i, i)].sub(f);
        }
        OperatorField { chart: self.chart.clone(), m }
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        OperatorField { chart: self.chart.clone(), m: self.m.scale(f) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        OperatorField { chart: self.chart.clone(), m: self.m.mul(&other.m) }
    }

    pub fn pow(&self, e: usize) -> Self {
        OperatorField { chart: self.chart.clone(), m: self.m.pow(e) }
    }
}

/// `[PX, PY] − P[PX, Y] − P[X, PY] + P²[X, Y]`.
pub fn nijenhuis(p: &OperatorField, x: &VectorField, y: &VectorField) -> Result<VectorField, GeomError> {
    if x.chart != y.chart || x.chart != p.chart {
        return Err(GeomError::ChartMismatch);
    }
    let px = p.apply(x)?;
    let py = p.apply(y)?;
    let t1 = lie_bracket(&px, &py)?;
    let t2 = p.apply(&lie_bracket(&px, y)?)?;
    let t3 = p.apply(&lie_bracket(x, &py)?)?;
    let t4 = p.apply(&p.apply(&lie_bracket(x, y)?)?)?;
    Ok(t1.sub(&t2).sub(&t3).add(&t4))
}

/// `N_P(∂_i, ∂_j) = 0` for every coordinate pair; enough because `N_P` is a
/// tensor.
pub fn nijenhuis_vanishes(p: &OperatorField) -> bool {
    let n = p.chart.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.par_iter().all(|&(i, j)| {
        let x = VectorField::coord(&p.chart, i);
        let y = VectorField::coord(&p.chart, j);
        nijenhuis(p, &x, &y).unwrap().is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv() -> Chart {
        Chart::new(["u", "v"]).unwrap()
    }

    fn xyz() -> Chart {
        Chart::new(["x", "y", "z"]).unwrap()
    }

    fn f(c: &Chart, s: &str) -> RatFunc {
        RatFunc::parse(s, c.names()).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let c = xyz();
        let dx = VectorField::coord(&c, 0);
        let dy = VectorField::coord(&c, 1);
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        let xdy = VectorField::parse(&c, &[("y", "x")]).unwrap();
        assert_eq!(lie_bracket(&dx, &xdy).unwrap(), dy);
        let ydx = VectorField::parse(&c, &[("x", "y")]).unwrap();
        let expect = VectorField::parse(&c, &[("x", "x"), ("y", "-y")]).unwrap();
        assert_eq!(lie_bracket(&xdy, &ydx).unwrap(), expect);
        let other = VectorField::coord(&uv(), 0);
        assert_eq!(lie_bracket(&dx, &other), Err(GeomError::ChartMismatch));
    }

    fn op(c: &Chart, rows: &[&[&str]]) -> OperatorField {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| f(c, s)).collect()).collect());
        OperatorField::new(c, m).unwrap()
    }

    #[test]
    fn nijenhuis_of_constant_and_identity() {
        let c = xyz();
        let p = op(&c, &[&["1", "2", "0"], &["0", "3", "-1"], &["5", "0", "1"]]);
        assert!(nijenhuis_vanishes(&p));
        let e = OperatorField::identity(&c);
        let x = VectorField::parse(&c, &[("x", "y*z"), ("z", "x^2")]).unwrap();
        let y = VectorField::parse(&c, &[("y", "x"), ("z", "1")]).unwrap();
        assert!(nijenhuis(&e, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn nijenhuis_diag_by_hand() {
        // P = diag(v, u), X = ∂u, Y = ∂v: PX = v∂u, PY = u∂v.
        // [v∂u, u∂v] = v∂v − u∂u; [v∂u, ∂v] = −∂u; [∂u, u∂v] = ∂v; [∂u, ∂v] = 0.
        // N = (v∂v − u∂u) − P(−∂u) − P(∂v) = −u∂u + v∂v + v∂u − u∂v.
        let c = uv();
        let p = op(&c, &[&["v", "0"], &["0", "u"]]);
        let n = nijenhuis(&p, &VectorField::coord(&c, 0), &VectorField::coord(&c, 1)).unwrap();
        let expect = VectorField::parse(&c, &[("u", "v - u"), ("v", "v - u")]).unwrap();
        assert_eq!(n, expect);
        assert!(!nijenhuis_vanishes(&p));
    }

    #[test]
    fn nijenhuis_upper_nilpotent() {
        // P = [[0, u], [0, 0]]: P∂u = 0, P∂v = u∂u, [∂u, u∂u] = ∂u, so
        // N(∂u, ∂v) = −P∂u = 0.
        let c = uv();
        let p = op(&c, &[&["0", "u"], &["0", "0"]]);
        assert!(nijenhuis_vanishes(&p));
    }
}
