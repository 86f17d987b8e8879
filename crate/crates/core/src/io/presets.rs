//! Nucleotide substitution symmetries and the example trees used across
//! the test suite and the command line.

use std::sync::Arc;

use crate::grouprep::{FiniteGroup, GModule, Symmetry};
use crate::tree::SpacedTree;

use super::IoError;

pub const NUCLEOTIDES: [&str; 4] = ["A", "C", "G", "T"];

/// Generators, as cycles on `A C G T`, of the named model's group.
pub fn preset_generators(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "JC69" => &["(A C G T)", "(A C)"],
        "K80" => &["(A C G T)", "(A G)"],
        "K81" => &["(A G)(C T)", "(A C)(G T)"],
        "CS05" => &["(A G)", "(C T)"],
        _ => return None,
    })
}

pub fn preset_symmetry(name: &str) -> Result<Arc<Symmetry>, IoError> {
    let gens = preset_generators(name)
        .ok_or_else(|| IoError::Input(format!("unknown preset '{name}'")))?;
    Ok(Symmetry::new(FiniteGroup::from_cycles(
        &NUCLEOTIDES,
        gens,
    )?)?)
}

/// The group of order 2 on labels `1`, `x`.
pub fn z2() -> Arc<Symmetry> {
    Symmetry::new(FiniteGroup::from_cycles(&["1", "x"], &["(1 x)"]).expect("valid cycles"))
        .expect("order 2")
}

/// A star with centre `c` and leaves `1..=n`, every vertex carrying `m`.
pub fn uniform_star(m: &GModule, n: usize) -> Result<SpacedTree, IoError> {
    let leaves: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut vertices = vec![("c".to_string(), m.clone())];
    vertices.extend(leaves.iter().map(|l| (l.clone(), m.clone())));
    let edges: Vec<(String, String)> = leaves
        .iter()
        .map(|l| ("c".to_string(), l.clone()))
        .collect();
    Ok(SpacedTree::new(m.symmetry().clone(), vertices, &edges)?)
}

/// The nucleotide permutation module of a preset model.
pub fn preset_module(name: &str) -> Result<GModule, IoError> {
    Ok(GModule::natural(preset_symmetry(name)?))
}

pub fn preset_star(name: &str, n: usize) -> Result<SpacedTree, IoError> {
    uniform_star(&preset_module(name)?, n)
}

/// The regular module of the group of order 2 in the `t`, `s` basis.
pub fn z2_weight_module() -> GModule {
    GModule::regular(z2())
        .weight_coordinates()
        .expect("abelian")
        .0
}

pub fn z2_star(n: usize) -> Result<SpacedTree, IoError> {
    uniform_star(&z2_weight_module(), n)
}

/// Two four-leaf stars glued at the common leaf `4`: leaves `1 2 3` on
/// centre `c1`, leaves `5 6 7` on centre `c2`.
pub fn two_star_tree() -> Result<SpacedTree, IoError> {
    let m = z2_weight_module();
    let names = ["1", "2", "3", "4", "5", "6", "7", "c1", "c2"];
    let vertices = names.iter().map(|n| (n.to_string(), m.clone())).collect();
    let edges: Vec<(String, String)> = [
        ("c1", "1"),
        ("c1", "2"),
        ("c1", "3"),
        ("c1", "4"),
        ("c2", "4"),
        ("c2", "5"),
        ("c2", "6"),
        ("c2", "7"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    Ok(SpacedTree::new(m.symmetry().clone(), vertices, &edges)?)
}

/// The quartet tree `12|34` over the trivial group, all spaces of
/// dimension `d`.
pub fn general_quartet(d: usize) -> Result<SpacedTree, IoError> {
    let sym = Symmetry::new(FiniteGroup::trivial())?;
    let labels: Vec<String> = (0..d).map(|i| i.to_string()).collect();
    let m = GModule::permutation(sym.clone(), labels, &[])?;
    let vertices = ["1", "2", "3", "4", "a", "b"]
        .iter()
        .map(|n| (n.to_string(), m.clone()))
        .collect();
    let edges: Vec<(String, String)> = [("a", "1"), ("a", "2"), ("a", "b"), ("b", "3"), ("b", "4")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    Ok(SpacedTree::new(sym, vertices, &edges)?)
}
