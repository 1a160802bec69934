pub mod field;
pub mod form;
pub mod gaussian;
pub mod matrix;
pub mod poly;
pub mod quaternion;
pub mod rational;
pub mod smith;

pub use field::Field;
pub use form::{coprime_basis, gcd_forms, BinaryForm};
pub use gaussian::GaussianRational;
pub use matrix::{kernel_basis, rank, subspace, Matrix, MatrixG, MatrixQ};
pub use poly::Poly;
pub use quaternion::{left_mult_matrix, Quaternion};
pub use rational::Rational;
pub use smith::{smith_form, PolyMatrix};
