//! Linear Pfaffian systems: adapted coframes, structure equations, Cartan test,
//! prolongation and restriction to submanifolds.

mod structure;
mod system;

pub use structure::{InvolutivityReport, CharacterVector, StructureEquations};
pub use system::PfaffianSystem;
