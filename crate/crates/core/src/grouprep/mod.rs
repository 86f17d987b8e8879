//! Finite groups, their modules and isotypic block coordinates.

pub mod blocks;
pub mod group;
pub mod irreps;
pub mod module;

use thiserror::Error;

pub use blocks::{HomBlocks, IsotypicBasis};
pub use group::{parse_cycles, FiniteGroup, Perm};
pub use irreps::{irreducible_representations, Irrep};
pub use module::{GModule, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("bad cycle notation: {0}")]
    Cycle(String),
    #[error("inconsistent label sets: {0}")]
    LabelMismatch(String),
    #[error("group axioms fail: {0}")]
    Axioms(String),
    #[error("irreducible representation: {0}")]
    Irrep(String),
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("module: {0}")]
    Module(String),
}
