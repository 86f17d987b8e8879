//! Generating sets for the ideals of equivariant tree models.

pub mod assembly;
pub mod linear;
pub mod matrices;
pub mod oracle;
pub mod provider;
pub mod verify;

use std::fmt;

use thiserror::Error;

use crate::algebra::polynomial::canonical_cmp;
use crate::algebra::{AlgebraError, VarTable};
use crate::grouprep::GroupError;
use crate::model::{InvariantCoordinates, ModelError};
use crate::tree::{SpacedTree, TreeError};
use crate::Poly;

pub use assembly::{
    branches_at_split, contract_across, flattening_ideal_sum, pullback_star_ideal,
    root_extension_ideal, split_shapes, tree_ideal, with_linear_cuts, Split,
};
pub use matrices::{contracted_ideal, rank_minors, symbolic_blocks, Side};
pub use oracle::{degree_bounded_vanishing_ideal, OracleConfig};
pub use provider::StarIdealProvider;
pub use verify::{verify_on_distributions, verify_on_model, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("no generators known for the star {0}")]
    UnresolvedStar(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error("block shapes do not match: {0}")]
    Shape(String),
    #[error("star ideal file: {0}")]
    StarFile(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Where a generator came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    /// Supplied for a star, by the built-in table or a file.
    StarInput,
    /// A rank condition on an isotypic block.
    Minor,
    /// A coefficient of a generator pushed through a symbolic product.
    Contracted,
    /// Found by the degree-bounded sampling oracle.
    Oracle,
    /// Pulled back along a linear map.
    Pullback,
    /// A linear form cutting out the invariant subspace.
    LinearCut,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::StarInput => "star-input",
            Provenance::Minor => "minor",
            Provenance::Contracted => "contracted",
            Provenance::Oracle => "oracle",
            Provenance::Pullback => "pullback",
            Provenance::LinearCut => "linear-cut",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub poly: Poly,
    pub provenance: Provenance,
}

/// Polynomials in named coordinates, with where each came from.
///
/// `complete` is false as soon as any input was produced by the
/// degree-bounded oracle; `sources` records how each star was resolved.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub vars: VarTable,
    pub generators: Vec<Generator>,
    pub complete: bool,
    pub sources: Vec<String>,
}

impl GeneratorSet {
    pub fn new(vars: VarTable) -> Self {
        GeneratorSet {
            vars,
            generators: Vec::new(),
            complete: true,
            sources: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.generators.iter().map(|g| g.poly.clone()).collect()
    }

    pub fn push(&mut self, poly: Poly, provenance: Provenance) {
        self.generators.push(Generator { poly, provenance });
    }

    pub fn extend(&mut self, polys: impl IntoIterator<Item = Poly>, provenance: Provenance) {
        for p in polys {
            self.push(p, provenance);
        }
    }

    /// Inherits completeness and source notes from an input set.
    pub fn absorb_status(&mut self, other: &GeneratorSet) {
        self.complete &= other.complete;
        for s in &other.sources {
            if !self.sources.contains(s) {
                self.sources.push(s.clone());
            }
        }
    }

    /// Drops zeros, makes generators monic, sorts them and removes
    /// duplicates, keeping the first provenance seen.
    pub fn canonicalize(&mut self) {
        let mut gens: Vec<Generator> = self
            .generators
            .drain(..)
            .filter(|g| !g.poly.is_zero())
            .map(|g| Generator {
                poly: g.poly.monic(),
                provenance: g.provenance,
            })
            .collect();
        gens.sort_by(|a, b| canonical_cmp(&a.poly, &b.poly).then(a.provenance.cmp(&b.provenance)));
        gens.dedup_by(|b, a| a.poly == b.poly);
        self.generators = gens;
    }

    /// Canonical text of every generator, one per entry.
    pub fn texts(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| g.poly.display(&self.vars))
            .collect()
    }
}

/// Invariant coordinates `z[...]` of the leaf space of `t`.
pub fn tree_coordinates(t: &SpacedTree) -> InvariantCoordinates {
    InvariantCoordinates::new("z", &t.leaf_modules())
}

pub fn var_table(coords: &InvariantCoordinates) -> VarTable {
    VarTable::from_labels(coords.labels().iter().cloned()).expect("pivot labels are distinct")
}

/// A readable description of a star: its centre and leaves with dimensions.
pub fn describe_star(t: &SpacedTree) -> String {
    let centre = t.centre().unwrap_or_default();
    let leaves: Vec<String> = t
        .leaves()
        .iter()
        .map(|l| format!("{l}:{}", t.module(l).dim()))
        .collect();
    format!(
        "{centre}:{} [{}] (group of order {})",
        t.module(&centre).dim(),
        leaves.join(", "),
        t.symmetry().order()
    )
}
