//! Arithmetic, the exponential map and root solvers on the Cayley-Dickson algebras
//! `A_n = R^(2^n)`: reals, complex numbers, quaternions, octonions, sedenions and beyond.

pub mod element;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod sampling;
pub mod structure;
pub mod suite;
pub mod transcendental;

pub use element::{Element, SecondBlock, DEFAULT_MAX_LEVEL, ZERO_THRESHOLD};
pub use error::{AlgebraError, Result};
