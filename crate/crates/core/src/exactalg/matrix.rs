//! Dense matrices over an exact [`Field`].

use std::fmt;
use std::ops::{Index, IndexMut};

use super::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?}, ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of row reduction: the reduced matrix and its pivot columns.
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
    /// Parity of the row swaps performed.
    pub swaps: usize,
}

impl<F: Field> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `n`).
    pub fn from_columns(n: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(F::neg)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a.mul(b);
                    let cur = &mut out[(i, j)];
                    *cur = cur.add(&t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Bilinear form `uᵀ M v`.
    pub fn bilinear(&self, u: &[F], v: &[F]) -> F {
        let mv = self.mul_vec(v);
        dot(u, &mv)
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)] == self[(j, i)].neg()))
    }

    /// Gaussian elimination. With `full`, produces the reduced row echelon
    /// form; otherwise stops at row echelon form. Pivots are chosen as the
    /// lightest nonzero entry of each column.
    pub fn echelon(&self, full: bool) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best: Option<(usize, usize)> = None;
            for i in r..m.rows {
                let x = &m[(i, c)];
                if !x.is_zero() {
                    let w = x.weight();
                    if best.is_none_or(|(_, bw)| w < bw) {
                        best = Some((i, w));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            if p != r {
                m.swap_rows(p, r);
                swaps += 1;
            }
            let inv = m[(r, c)].inv();
            if full {
                for j in c..m.cols {
                    let x = &m[(r, j)];
                    if !x.is_zero() {
                        m[(r, j)] = x.mul(&inv);
                    }
                }
            }
            let lo = if full { 0 } else { r + 1 };
            for i in lo..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = if full { m[(i, c)].clone() } else { m[(i, c)].mul(&inv) };
                for j in c..m.cols {
                    let prj = &m[(r, j)];
                    if prj.is_zero() {
                        continue;
                    }
                    let t = factor.mul(prj);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots, swaps }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon(false).pivots.len()
    }

    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let e = self.echelon(false);
        if e.pivots.len() < self.rows {
            return F::zero();
        }
        let mut d = F::one();
        for i in 0..self.rows {
            d = d.mul(&e.reduced[(i, i)]);
        }
        if e.swaps % 2 == 1 {
            d.neg()
        } else {
            d
        }
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let e = self.echelon(true);
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in e.pivots.iter().enumerate() {
                v[pc] = e.reduced[(row, free)].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `self · x = b`, with every free variable set to
    /// zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side has wrong length");
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let e = aug.echelon(true);
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (row, &pc) in e.pivots.iter().enumerate() {
            x[pc] = e.reduced[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let e = self.hstack(&Self::identity(n)).echelon(true);
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(e.reduced.submatrix(&rows, &cols))
    }

    /// Indices of a maximal independent subset of the columns, chosen greedily
    /// from the left.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.echelon(false).pivots
    }

    /// Basis of the column space, as a subset of the original columns.
    pub fn column_space(&self) -> Vec<Vec<F>> {
        self.independent_columns().into_iter().map(|j| self.column(j)).collect()
    }
}

pub fn dot<F: Field>(u: &[F], v: &[F]) -> F {
    assert_eq!(u.len(), v.len());
    let mut acc = F::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    acc
}

pub fn vec_add<F: Field>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter().zip(v).map(|(a, b)| a.add(b)).collect()
}

pub fn vec_sub<F: Field>(u: &[F], v: &[F]) -> Vec<F> {
    u.iter().zip(v).map(|(a, b)| a.sub(b)).collect()
}

pub fn vec_scale<F: Field>(c: &F, v: &[F]) -> Vec<F> {
    v.iter().map(|x| x.mul(c)).collect()
}

/// `Σ cᵢ vᵢ` for vectors of length `n`.
pub fn lin_comb<F: Field>(n: usize, coeffs: &[F], vectors: &[Vec<F>]) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = o.add(&c.mul(x));
            }
        }
    }
    out
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(F::is_zero)
}

/// Rank of a list of vectors of common length `n`.
pub fn rank_of<F: Field>(n: usize, vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(n, vectors).rank()
}

/// Basis of the intersection of two subspaces given by spanning columns.
pub fn intersect<F: Field>(n: usize, u: &[Vec<F>], w: &[Vec<F>]) -> Vec<Vec<F>> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    // x = U a = W b  <=>  [U | -W] (a, b) = 0.
    let neg_w: Vec<Vec<F>> = w.iter().map(|v| v.iter().map(F::neg).collect()).collect();
    let mut cols = u.to_vec();
    cols.extend(neg_w);
    let m = Matrix::from_columns(n, &cols);
    let sols = m.kernel();
    let found: Vec<Vec<F>> = sols.iter().map(|s| lin_comb(n, &s[..u.len()], u)).filter(|v| !is_zero_vec(v)).collect();
    independent_subset(n, &found)
}

/// Greedy maximal independent subset, preserving order.
pub fn independent_subset<F: Field>(n: usize, vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(n, vectors).column_space()
}
