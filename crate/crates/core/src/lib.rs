//! Q-deformed Fock spaces over a finite weighted site grid.

pub mod chaos;
pub mod cli;
pub mod error;
pub mod field;
pub mod fock;
pub mod kernel;
pub mod levy;
pub mod linalg;
pub mod partitions;
pub mod symmetrize;
pub mod tensor;

pub use error::{Error, Result};
