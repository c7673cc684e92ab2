//! Symbolic engine for restricted Hamiltonian systems and the Cartan
//! constraint algorithm on linear Pfaffian systems.

pub mod cli;
pub mod error;
pub mod exterior;
pub mod hamilton;
pub mod ladder;
pub mod pfaffian;
pub mod symcore;

pub use error::{Error, Result};
