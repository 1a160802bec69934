//! Exact classification of pairs `(U, E)` where `E = ℍᵏ` and `U ⊆ E` is a
//! real subspace, via the kernel/cokernel sheaf of the induced bundle map
//! over the twistor sphere.

pub mod check;
pub mod classify;
pub mod error;
pub mod exact;
pub mod pairs;
pub mod pencil;
pub mod selftest;
pub mod sheaf;

pub use error::{Error, Result};
