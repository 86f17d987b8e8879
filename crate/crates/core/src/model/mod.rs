//! Tree representations and the maps they induce on the leaf space.

pub mod actions;
pub mod coords;
pub mod psi;
pub mod representation;
pub mod tensor;

use thiserror::Error;

pub use coords::InvariantCoordinates;
pub use psi::{distribution_table, phi, psi, psi_split_at};
pub use representation::{random_representation, StochasticRepresentation, TreeRepresentation};
pub use tensor::LeafTensor;

use crate::tree::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("edge {0}-{1}: {2}")]
    Edge(String, String, String),
    #[error("root distribution: {0}")]
    RootDistribution(String),
    #[error("vertex '{0}' has no distinguished basis")]
    NotBased(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
