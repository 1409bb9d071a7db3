//! Landau levels on the deformed two-torus: flux quantization, projected
//! representations of the noncommutative torus, Harper spectra and the
//! rational Hofstadter butterfly.

pub mod algebra;
pub mod butterfly;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod representations;
pub mod special;
pub mod spectrum;
pub mod verify;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use num_complex;
pub use num_rational;
