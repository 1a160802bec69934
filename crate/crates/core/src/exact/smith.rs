use std::fmt;

use super::gaussian::GaussianRational as G;
use super::matrix::MatrixG;
use super::poly::Poly;

/// Matrix over ℚ(i)[t], row-major.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly<G>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Poly<G>>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged polynomial matrix");
        PolyMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    /// The matrix `a + t·b`.
    pub fn linear(a: &MatrixG, b: &MatrixG) -> Self {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        let mut m = Self::zeros(a.rows(), a.cols());
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                m.set(r, c, Poly::linear(a[(r, c)].clone(), b[(r, c)].clone()));
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

    pub fn get(&self, r: usize, c: usize) -> &Poly<G> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly<G>) {
        self.data[r * self.cols + c] = p;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[target] -= q · row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &Poly<G>, from_col: usize) {
        for c in from_col..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c).sub(&q.mul(s));
            self.set(target, c, v);
        }
    }

    fn col_axpy(&mut self, target: usize, source: usize, q: &Poly<G>, from_row: usize) {
        for r in from_row..self.rows {
            let s = self.get(r, source);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, target).sub(&q.mul(s));
            self.set(r, target, v);
        }
    }

    /// Determinant of a square matrix by cofactor expansion along the first
    /// row. Exponential; intended for small oracles.
    pub fn det(&self) -> Poly<G> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        match self.rows {
            0 => Poly::one(),
            1 => self.get(0, 0).clone(),
            n => {
                let mut acc = Poly::zero();
                for c in 0..n {
                    if self.get(0, c).is_zero() {
                        continue;
                    }
                    let keep: Vec<usize> = (0..n).filter(|&x| x != c).collect();
                    let rows: Vec<usize> = (1..n).collect();
                    let minor = self.submatrix(&rows, &keep).det();
                    let term = self.get(0, c).mul(&minor);
                    acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix::from_rows(rows.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect()).collect())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn deg(p: &Poly<G>) -> usize {
    p.degree().expect("nonzero polynomial")
}

/// Invariant factors `f₁ | f₂ | … | f_r` of `m`, monic, where `r` is the
/// rank over ℚ(i)(t). Works by unimodular row and column operations with a
/// minimal-degree pivot at each stage.
pub fn smith_form(m: &PolyMatrix) -> Vec<Poly<G>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut out = Vec::new();
    for s in 0..rows.min(cols) {
        // choose the pivot of least degree in the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for r in s..rows {
            for c in s..cols {
                let p = a.get(r, c);
                if !p.is_zero() && best.is_none_or(|(_, _, d)| deg(p) < d) {
                    best = Some((r, c, deg(p)));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        a.swap_rows(s, pr);
        a.swap_cols(s, pc);
        loop {
            let mut restart = false;
            for r in s + 1..rows {
                if a.get(r, s).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(r, s).div_rem(a.get(s, s));
                a.row_axpy(r, s, &q, s);
                if !rem.is_zero() {
                    a.swap_rows(s, r);
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            for c in s + 1..cols {
                if a.get(s, c).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(s, c).div_rem(a.get(s, s));
                a.col_axpy(c, s, &q, s);
                if !rem.is_zero() {
                    a.swap_cols(s, c);
                    restart = true;
                    break;
                }
            }
            if restart {
                continue;
            }
            // row s and column s are clear; enforce divisibility of the rest
            let pivot = a.get(s, s).clone();
            let offender = (s + 1..rows).find(|&r| (s + 1..cols).any(|c| !pivot.divides(a.get(r, c))));
            match offender {
                Some(r) => {
                    let one = Poly::one();
                    a.row_axpy(s, r, &one.neg(), s);
                }
                None => break,
            }
        }
        out.push(a.get(s, s).monic());
    }
    out
}

/// Monic gcd of all `r×r` minors; exponential, for small test oracles.
pub fn minor_gcd(m: &PolyMatrix, r: usize) -> Poly<G> {
    let mut acc = Poly::<G>::zero();
    for rows in combinations(m.rows, r) {
        for cols in combinations(m.cols, r) {
            let d = m.submatrix(&rows, &cols).det();
            acc = acc.gcd(&d);
            if acc.degree() == Some(0) {
                return acc;
            }
        }
    }
    acc
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_pow(n: usize) -> Poly<G> {
        let mut c = vec![G::zero(); n + 1];
        c[n] = G::one();
        Poly::new(c)
    }

    fn c(n: i64) -> Poly<G> {
        Poly::constant(G::from_int(n))
    }

    #[test]
    fn diagonal_examples() {
        let z = Poly::zero;
        let m = PolyMatrix::from_rows(vec![vec![c(1), z(), z()], vec![z(), t_pow(1), z()], vec![z(), z(), t_pow(2)]]);
        assert_eq!(smith_form(&m), vec![c(1), t_pow(1), t_pow(2)]);
        let m = PolyMatrix::from_rows(vec![vec![t_pow(1), z()], vec![z(), t_pow(1)]]);
        assert_eq!(smith_form(&m), vec![t_pow(1), t_pow(1)]);
    }

    #[test]
    fn jordan_block() {
        let m = PolyMatrix::from_rows(vec![vec![t_pow(1), c(1)], vec![Poly::zero(), t_pow(1)]]);
        assert_eq!(smith_form(&m), vec![c(1), t_pow(2)]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        // diag(t, t+1) ~ diag(1, t(t+1))
        let tp1 = Poly::linear(G::one(), G::one());
        let m = PolyMatrix::from_rows(vec![vec![t_pow(1), Poly::zero()], vec![Poly::zero(), tp1.clone()]]);
        assert_eq!(smith_form(&m), vec![c(1), t_pow(1).mul(&tp1)]);
    }

    #[test]
    fn rank_deficient() {
        let m = PolyMatrix::from_rows(vec![vec![t_pow(1), t_pow(2)], vec![c(1), t_pow(1)]]);
        assert_eq!(smith_form(&m), vec![c(1)]);
        assert!(smith_form(&PolyMatrix::zeros(2, 3)).is_empty());
    }
}
