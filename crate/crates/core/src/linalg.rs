//! Dense and sparse matrices over an exact field.

use std::fmt;

use rand::Rng;

use crate::field::Field;

/// Density below which rank computations switch to the sparse kernel.
pub const DEFAULT_SPARSE_THRESHOLD: f64 = 0.25;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Output of [`Matrix::rank_kernel_image`].
#[derive(Clone, Debug)]
pub struct RankKernelImage<F> {
    pub rank: usize,
    /// Columns span the kernel (`cols x (cols - rank)`).
    pub kernel: Matrix<F>,
    /// Independent columns of the input spanning its column space.
    pub image: Matrix<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
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
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| F::random(rng)).collect(),
        }
    }

    /// A random invertible matrix, built as a product of unit triangular
    /// factors and a nonzero diagonal.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut lower = Self::identity(n);
        let mut upper = Self::identity(n);
        for i in 0..n {
            for j in 0..i {
                lower[(i, j)] = F::random(rng);
                upper[(j, i)] = F::random(rng);
            }
            upper[(i, i)] = F::random_nonzero(rng);
        }
        &lower * &upper
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn density(&self) -> f64 {
        if self.data.is_empty() {
            0.0
        } else {
            self.nnz() as f64 / self.data.len() as f64
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Columns `idx` of `self`, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for (j, &c) in idx.iter().enumerate() {
            for r in 0..self.rows {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                m[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = m[(row, c)].clone() * inv.clone();
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for c in col..m.cols {
                        if !m[(row, c)].is_zero() {
                            let v = m[(r, c)].clone() - f.clone() * m[(row, c)].clone();
                            m[(r, c)] = v;
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Rank, choosing the sparse kernel below [`DEFAULT_SPARSE_THRESHOLD`].
    pub fn rank(&self) -> usize {
        self.rank_with_threshold(DEFAULT_SPARSE_THRESHOLD)
    }

    pub fn rank_with_threshold(&self, threshold: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.density() < threshold {
            SparseMatrix::from_dense(self).rank()
        } else {
            self.rref().pivots.len()
        }
    }

    pub fn rank_kernel_image(&self) -> RankKernelImage<F> {
        let Rref { matrix, pivots } = self.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Self::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            kernel[(f, k)] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                kernel[(p, k)] = -matrix[(i, f)].clone();
            }
        }
        RankKernelImage {
            rank,
            kernel,
            image: self.select_columns(&pivots),
        }
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = matrix[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> std::ops::Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::<F>::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if !b.is_zero() {
                        let v = out[(r, c)].clone() + a.clone() * b.clone();
                        out[(r, c)] = v;
                    }
                }
            }
        }
        out
    }
}

impl<F: Field> std::ops::Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<F: Field> std::ops::Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

/// Row-sparse matrix: each row is a list of `(column, value)` sorted by column.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix<F> {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn from_dense(m: &Matrix<F>) -> Self {
        SparseMatrix {
            cols: m.cols(),
            rows: (0..m.rows())
                .map(|r| {
                    m.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(c, x)| (c, x.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// Adds `v` at `(r, c)`. Rows must be normalized before use.
    pub fn push(&mut self, r: usize, c: usize, v: F) {
        self.rows[r].push((c, v));
    }

    /// Sort rows and merge duplicate columns.
    pub fn normalize(&mut self) {
        for row in &mut self.rows {
            row.sort_by_key(|(c, _)| *c);
            let mut out: Vec<(usize, F)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match out.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
                    _ => out.push((c, v)),
                }
            }
            out.retain(|(_, v)| !v.is_zero());
            *row = out;
        }
    }

    pub fn to_dense(&self) -> Matrix<F> {
        let mut m = Matrix::<F>::zeros(self.rows.len(), self.cols);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = m[(r, *c)].clone() + v.clone();
            }
        }
        m
    }

    /// Rank by sparse row reduction.
    pub fn rank(&self) -> usize {
        let mut pivot_rows: std::collections::HashMap<usize, Vec<(usize, F)>> =
            std::collections::HashMap::new();
        for row in &self.rows {
            let mut r = row.clone();
            while let Some((c, v)) = r.first().cloned() {
                match pivot_rows.get(&c) {
                    Some(p) => r = axpy(&r, &(-v), p),
                    None => {
                        let inv = v.inv().expect("nonzero");
                        let normalized = r.into_iter().map(|(c, x)| (c, x * inv.clone())).collect();
                        pivot_rows.insert(c, normalized);
                        break;
                    }
                }
            }
        }
        pivot_rows.len()
    }
}

/// `a + s * b` for sorted sparse rows.
fn axpy<F: Field>(a: &[(usize, F)], s: &F, b: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, s.clone() * b[j].1.clone()));
            j += 1;
        } else {
            let v = a[i].1.clone() + s.clone() * b[j].1.clone();
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
