use std::fmt::Debug;

use super::gaussian::GaussianRational;
use super::rational::Rational;

/// Minimal exact field interface used by the generic matrix and polynomial
/// code. Division by zero is a caller bug and panics.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn fadd(&self, rhs: &Self) -> Self;
    fn fsub(&self, rhs: &Self) -> Self;
    fn fmul(&self, rhs: &Self) -> Self;
    fn fneg(&self) -> Self;
    fn finv(&self) -> Self;

    fn fdiv(&self, rhs: &Self) -> Self {
        self.fmul(&rhs.finv())
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn fadd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn fsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn fmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.recip().expect("division by zero rational")
    }
    fn fdiv(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero rational");
        self / rhs
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn from_i64(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn fadd(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn fsub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn fmul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn finv(&self) -> Self {
        self.inv().expect("division by zero gaussian rational")
    }
}
