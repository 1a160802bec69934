use std::fmt;
use std::ops::{Index, IndexMut};

use super::field::Field;
use super::gaussian::GaussianRational;
use super::rational::Rational;

/// Dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

pub type MatrixG = Matrix<GaussianRational>;
pub type MatrixQ = Matrix<Rational>;

impl<F: Field> Matrix<F> {
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

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix columns");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
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

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
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

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = &self[(r, t)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(t, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].fadd(&a.fmul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.fadd(&a.fmul(b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.fadd(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        self.map(|x| x.fmul(s))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `self` and `other` side by side.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
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

    pub fn block_diag(blocks: &[Matrix<F>]) -> Matrix<F> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m[(i, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns (Gauss–Jordan, first nonzero
    /// pivot). The result is unique, so pivot order never affects it.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(p) = (pr..rows).find(|&r| !self[(r, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(pr, p);
            let inv = self[(pr, c)].finv();
            if !inv.is_one() {
                for j in c..cols {
                    let v = self[(pr, j)].fmul(&inv);
                    self[(pr, j)] = v;
                }
            }
            let pivot_row: Vec<F> = self.row(pr)[c..].to_vec();
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let factor = self[(r, c)].clone();
                if factor.is_zero() {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if pv.is_zero() {
                        continue;
                    }
                    let j = c + off;
                    let v = self[(r, j)].fsub(&factor.fmul(pv));
                    self[(r, j)] = v;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows > self.cols {
            return self.transpose().rank();
        }
        self.rref().1.len()
    }

    /// Canonical kernel basis read off the reduced echelon form: one vector per
    /// free column, with a 1 in that column.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r[(row, f)].fneg();
                }
                v
            })
            .collect()
    }

    /// Nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.fneg();
            }
            let pivot = m[(c, c)].clone();
            det = det.fmul(&pivot);
            let inv = pivot.finv();
            for r in c + 1..n {
                let factor = m[(r, c)].fmul(&inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(r, j)].fsub(&factor.fmul(&m[(c, j)]));
                    m[(r, j)] = v;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl MatrixG {
    pub fn conj(&self) -> MatrixG {
        self.map(GaussianRational::conj)
    }

    pub fn from_real(m: &MatrixQ) -> MatrixG {
        m.map(|x| GaussianRational::real(x.clone()))
    }
}

/// `rank(M)`.
pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    m.rank()
}

/// `kernel_basis(M)`.
pub fn kernel_basis<F: Field>(m: &Matrix<F>) -> Vec<Vec<F>> {
    m.kernel_basis()
}

/// Linear subspace operations on explicit bases. Every function returns a
/// reduced-echelon basis, so equal subspaces have identical representations.
pub mod subspace {
    use super::*;

    pub fn span<F: Field>(vectors: &[Vec<F>], dim: usize) -> Vec<Vec<F>> {
        if vectors.is_empty() {
            return Vec::new();
        }
        Matrix::from_rows(vectors.to_vec(), dim).row_space_basis()
    }

    pub fn sum<F: Field>(a: &[Vec<F>], b: &[Vec<F>], dim: usize) -> Vec<Vec<F>> {
        let mut all = a.to_vec();
        all.extend(b.iter().cloned());
        span(&all, dim)
    }

    /// Linear functionals vanishing on the span (as coordinate vectors).
    pub fn annihilator<F: Field>(basis: &[Vec<F>], dim: usize) -> Vec<Vec<F>> {
        if basis.is_empty() {
            return (0..dim).map(|i| unit(dim, i)).collect();
        }
        span(&Matrix::from_rows(basis.to_vec(), dim).kernel_basis(), dim)
    }

    pub fn intersection<F: Field>(a: &[Vec<F>], b: &[Vec<F>], dim: usize) -> Vec<Vec<F>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let ann_b = annihilator(b, dim);
        if ann_b.is_empty() {
            return span(a, dim);
        }
        // x = Σ c_t a_t with ann_b · x = 0
        let ann = Matrix::from_rows(ann_b, dim);
        let a_cols = Matrix::from_rows(a.to_vec(), dim).transpose();
        let coeffs = ann.mul(&a_cols).kernel_basis();
        let vecs: Vec<Vec<F>> = coeffs.iter().map(|c| a_cols.mul_vec(c)).collect();
        span(&vecs, dim)
    }

    /// `{x : M x ∈ span(target)}`.
    pub fn preimage<F: Field>(m: &Matrix<F>, target: &[Vec<F>]) -> Vec<Vec<F>> {
        let ann = annihilator(target, m.rows());
        if ann.is_empty() {
            return (0..m.cols()).map(|i| unit(m.cols(), i)).collect();
        }
        let cond = Matrix::from_rows(ann, m.rows()).mul(m);
        span(&cond.kernel_basis(), m.cols())
    }

    pub fn image<F: Field>(m: &Matrix<F>, basis: &[Vec<F>]) -> Vec<Vec<F>> {
        let imgs: Vec<Vec<F>> = basis.iter().map(|v| m.mul_vec(v)).collect();
        span(&imgs, m.rows())
    }

    pub fn contains<F: Field>(basis: &[Vec<F>], v: &[F], dim: usize) -> bool {
        let mut all = basis.to_vec();
        all.push(v.to_vec());
        span(&all, dim).len() == span(basis, dim).len()
    }

    pub fn is_subspace<F: Field>(small: &[Vec<F>], big: &[Vec<F>], dim: usize) -> bool {
        sum(small, big, dim).len() == span(big, dim).len()
    }

    pub fn unit<F: Field>(dim: usize, i: usize) -> Vec<F> {
        let mut v = vec![F::zero(); dim];
        v[i] = F::one();
        v
    }
}
