//! Exact classification of 2-dimensional evolution algebras.

pub mod aut;
pub mod classify;
pub mod cli;
pub mod der;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod symbolic;
pub mod tensor;

pub use error::{Error, Result};
