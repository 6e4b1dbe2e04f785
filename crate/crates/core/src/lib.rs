pub mod cli;
pub mod error;
pub mod matrix;
pub mod mps;
pub mod nmr;
pub mod precision;

pub use error::{Error, Result};
pub use matrix::MPMatrix;
pub use precision::{MPComplex, MPReal, Precision};
