use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational;
use super::matrix::Matrix;
use super::rational::Rational;

/// Quaternion `r + i·i + j·j + k·k` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub r: Rational,
    pub i: Rational,
    pub j: Rational,
    pub k: Rational,
}

impl Quaternion {
    pub fn new(r: Rational, i: Rational, j: Rational, k: Rational) -> Self {
        Quaternion { r, i, j, k }
    }

    pub fn from_ints(r: i64, i: i64, j: i64, k: i64) -> Self {
        Self::new(Rational::from_int(r), Rational::from_int(i), Rational::from_int(j), Rational::from_int(k))
    }

    pub fn from_coords(c: &[Rational]) -> Self {
        assert_eq!(c.len(), 4);
        Self::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn unit_i() -> Self {
        Self::from_ints(0, 1, 0, 0)
    }

    pub fn unit_j() -> Self {
        Self::from_ints(0, 0, 1, 0)
    }

    pub fn unit_k() -> Self {
        Self::from_ints(0, 0, 0, 1)
    }

    pub fn real(r: Rational) -> Self {
        Self::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// Coordinates in the real basis `(1, i, j, k)`.
    pub fn coords(&self) -> [Rational; 4] {
        [self.r.clone(), self.i.clone(), self.j.clone(), self.k.clone()]
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.r.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.r.clone(), -&self.i, -&self.j, -&self.k)
    }

    /// `r² + i² + j² + k²`.
    pub fn norm(&self) -> Rational {
        self.r.square() + self.i.square() + self.j.square() + self.k.square()
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm().recip()?;
        Some(self.conj().scale(&n))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(&self.r * s, &self.i * s, &self.j * s, &self.k * s)
    }

    /// Inner product of the coordinate vectors in `(1, i, j, k)`.
    pub fn dot(&self, other: &Self) -> Rational {
        &self.r * &other.r + &self.i * &other.i + &self.j * &other.j + &self.k * &other.k
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Quaternion) -> Option<Self> {
        Some(&(g * self) * &g.inv()?)
    }

    /// The 4×4 real matrix of `x ↦ self·x` in the basis `(1, i, j, k)`.
    pub fn left_mult_matrix(&self) -> Matrix<Rational> {
        let basis = [Self::one(), Self::unit_i(), Self::unit_j(), Self::unit_k()];
        let mut m = Matrix::zeros(4, 4);
        for (col, e) in basis.iter().enumerate() {
            let image = self * e;
            for (row, c) in image.coords().into_iter().enumerate() {
                m[(row, col)] = c;
            }
        }
        m
    }

    /// The 4×4 real matrix of `x ↦ x·self`.
    pub fn right_mult_matrix(&self) -> Matrix<Rational> {
        let basis = [Self::one(), Self::unit_i(), Self::unit_j(), Self::unit_k()];
        let mut m = Matrix::zeros(4, 4);
        for (col, e) in basis.iter().enumerate() {
            let image = e * self;
            for (row, c) in image.coords().into_iter().enumerate() {
                m[(row, col)] = c;
            }
        }
        m
    }

    /// Image in SU(2)·ℝ₊ under the algebra homomorphism sending
    /// `i ↦ diag(-I, I)`, `j ↦ [[0,-I],[-I,0]]`, `k ↦ [[0,-1],[1,0]]`.
    /// For unit `g`, the sphere point of `ρ(g)·w` is `g·u(w)·g⁻¹`.
    pub fn su2(&self) -> [[GaussianRational; 2]; 2] {
        let p = GaussianRational::new(self.r.clone(), -&self.i);
        let q = GaussianRational::new(-&self.k, -&self.j);
        let s = GaussianRational::new(self.k.clone(), -&self.j);
        let t = GaussianRational::new(self.r.clone(), self.i.clone());
        [[p, q], [s, t]]
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (c, unit) in [(&self.r, ""), (&self.i, "i"), (&self.j, "j"), (&self.k, "k")] {
            if c.is_zero() {
                continue;
            }
            if unit.is_empty() {
                terms.push(c.to_string());
            } else if c.is_one() {
                terms.push(unit.to_string());
            } else if *c == -Rational::one() {
                terms.push(format!("-{unit}"));
            } else {
                terms.push(format!("{c}{unit}"));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if t.starts_with('-') {
                out.push_str(t);
            } else {
                out.push('+');
                out.push_str(t);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'b> Mul<&'b Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn mul(self, o: &'b Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.r, &self.i, &self.j, &self.k);
        let (a2, b2, c2, d2) = (&o.r, &o.i, &o.j, &o.k);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl<'b> Add<&'b Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn add(self, o: &'b Quaternion) -> Quaternion {
        Quaternion::new(&self.r + &o.r, &self.i + &o.i, &self.j + &o.j, &self.k + &o.k)
    }
}

impl<'b> Sub<&'b Quaternion> for &Quaternion {
    type Output = Quaternion;
    fn sub(self, o: &'b Quaternion) -> Quaternion {
        Quaternion::new(&self.r - &o.r, &self.i - &o.i, &self.j - &o.j, &self.k - &o.k)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.r, -&self.i, -&self.j, -&self.k)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        &self * &o
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        &self + &o
    }
}

/// Real `4×4` matrix of `x ↦ u·x`; see [`Quaternion::left_mult_matrix`].
pub fn left_mult_matrix(u: &Quaternion) -> Matrix<Rational> {
    u.left_mult_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::Field;

    fn q(r: i64, i: i64, j: i64, k: i64) -> Quaternion {
        Quaternion::from_ints(r, i, j, k)
    }

    #[test]
    fn hamilton_table() {
        let (i, j, k) = (Quaternion::unit_i(), Quaternion::unit_j(), Quaternion::unit_k());
        let minus_one = q(-1, 0, 0, 0);
        assert_eq!(&i * &i, minus_one);
        assert_eq!(&j * &j, minus_one);
        assert_eq!(&k * &k, minus_one);
        assert_eq!(&i * &j, k);
        assert_eq!(&j * &k, i);
        assert_eq!(&k * &i, j);
        assert_eq!(&j * &i, -&k);
    }

    #[test]
    fn conjugation_reverses_products_and_norm_is_multiplicative() {
        let a = q(1, 2, -1, 3);
        let b = q(0, 1, 4, -2);
        assert_eq!((&a * &b).conj(), &b.conj() * &a.conj());
        assert_eq!((&a * &b).norm(), &a.norm() * &b.norm());
        assert_eq!(&a * &a.inv().unwrap(), Quaternion::one());
    }

    #[test]
    fn left_mult_matrix_of_i_and_j() {
        let m = Quaternion::unit_i().left_mult_matrix();
        let cols = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                assert_eq!(m[(r, c)], Rational::from_int(*v));
            }
        }
        // j·k = i
        let m = Quaternion::unit_j().left_mult_matrix();
        let col_k: Vec<_> = (0..4).map(|r| m[(r, 3)].clone()).collect();
        assert_eq!(col_k, vec![Rational::zero(), Rational::one(), Rational::zero(), Rational::zero()]);
        assert_eq!(Quaternion::one().left_mult_matrix(), Matrix::identity(4));
    }

    #[test]
    fn left_mult_is_homomorphism_on_samples() {
        let samples = [q(1, 0, 0, 0), q(0, 1, 0, 0), q(0, 0, 1, 0), q(0, 0, 0, 1), q(1, 1, 0, 0), q(1, 1, 1, 1)];
        for u in &samples {
            for v in &samples {
                let lhs = (u * v).left_mult_matrix();
                let rhs = u.left_mult_matrix().mul(&v.left_mult_matrix());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn unit_imaginaries_give_complex_structures() {
        let units = [
            Quaternion::unit_i(),
            Quaternion::unit_j(),
            Quaternion::unit_k(),
            Quaternion::new(Rational::zero(), Rational::new(2, 3), Rational::new(2, 3), Rational::new(1, 3)),
        ];
        for u in &units {
            let m = u.left_mult_matrix();
            assert_eq!(m.transpose(), m.map(|x| x.fneg()));
            assert_eq!(m.mul(&m), Matrix::<Rational>::identity(4).map(|x| x.fneg()));
        }
    }

    #[test]
    fn su2_is_multiplicative() {
        let a = q(1, 2, -1, 3);
        let b = q(2, 0, 1, -1);
        let ab = (&a * &b).su2();
        let (ma, mb) = (a.su2(), b.su2());
        for r in 0..2 {
            for c in 0..2 {
                let v = &(&ma[r][0] * &mb[0][c]) + &(&ma[r][1] * &mb[1][c]);
                assert_eq!(v, ab[r][c]);
            }
        }
    }
}
