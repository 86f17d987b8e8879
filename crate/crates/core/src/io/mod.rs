//! File formats: tree descriptions, representations, star ideal tables and
//! generator listings.

pub mod presets;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::text::{parse_polynomial, parse_scalar};
use crate::algebra::AlgebraError;
use crate::grouprep::{parse_cycles, FiniteGroup, GModule, GroupError, Perm, Symmetry};
use crate::ideal::provider::StarEntry;
use crate::ideal::{tree_coordinates, var_table, GeneratorSet, Provenance};
use crate::model::{StochasticRepresentation, TreeRepresentation};
use crate::tree::{SpacedTree, TreeError};
use crate::{Mat, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Parse(String),
    #[error("at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Deserializes with JSON-pointer paths in error messages.
fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        if inner.is_syntax() || inner.is_eof() {
            IoError::Parse(format!("invalid JSON: {inner}"))
        } else {
            use serde_path_to_error::Segment;
            let mut pointer = String::new();
            for seg in e.path().iter() {
                match seg {
                    Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                    Segment::Map { key } => {
                        pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1")))
                    }
                    Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                    Segment::Unknown => pointer.push_str("/?"),
                }
            }
            IoError::Schema {
                pointer,
                message: strip_position(&inner.to_string()),
            }
        }
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// How vertex spaces are coordinatized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinates {
    /// Weight coordinates (`t`, `s`) for groups of order 2, otherwise
    /// natural.
    #[default]
    Auto,
    Natural,
    Weight,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Preset(String),
    Generators {
        labels: Vec<String>,
        generators: Vec<String>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModuleKind {
    /// The permutation module on the group's labels.
    Natural,
    Regular,
    /// Images of the basis under each group generator, in cycle notation.
    Permutation {
        labels: Vec<String>,
        generators: Vec<String>,
    },
    /// Generator matrices acting on columns, with a form and optionally a
    /// distinguished basis given by its columns. Entries are strings.
    Matrices {
        labels: Vec<String>,
        generators: Vec<Vec<Vec<String>>>,
        form: Vec<Vec<String>>,
        #[serde(default)]
        basis: Option<Vec<Vec<String>>>,
        #[serde(default)]
        basis_labels: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug, Deserialize)]
pub struct ModuleSpec {
    #[serde(flatten)]
    pub kind: ModuleKind,
    #[serde(default)]
    pub coordinates: Option<Coordinates>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub name: String,
    #[serde(default)]
    pub module: Option<String>,
    #[serde(default = "yes")]
    pub based: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub group: GroupSpec,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub coordinates: Coordinates,
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<(String, String)>,
}

fn build_symmetry(g: &GroupSpec) -> Result<Arc<Symmetry>, IoError> {
    match g {
        GroupSpec::Preset(name) => {
            presets::preset_symmetry(name).map_err(|e| schema("/group", e.to_string()))
        }
        GroupSpec::Generators { labels, generators } => {
            let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            let cycles: Vec<&str> = generators.iter().map(String::as_str).collect();
            let group = FiniteGroup::from_cycles(&refs, &cycles)
                .map_err(|e| schema("/group", e.to_string()))?;
            Ok(Symmetry::new(group)?)
        }
    }
}

fn matrix(rows: &[Vec<String>], pointer: &str) -> Result<Mat, IoError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| {
                    parse_scalar(x).map_err(|e| schema(format!("{pointer}/{i}/{j}"), e.to_string()))
                })
                .collect()
        })
        .collect::<Result<Vec<Vec<Scalar>>, _>>()?;
    Mat::from_rows(parsed).map_err(|e| schema(pointer, e.to_string()))
}

fn build_module(
    sym: &Arc<Symmetry>,
    spec: &ModuleSpec,
    default: Coordinates,
    pointer: &str,
) -> Result<GModule, IoError> {
    let bad = |e: GroupError| schema(pointer, e.to_string());
    let m = match &spec.kind {
        ModuleKind::Natural => GModule::natural(sym.clone()),
        ModuleKind::Regular => GModule::regular(sym.clone()),
        ModuleKind::Permutation { labels, generators } => {
            if generators.len() != sym.group().generators().len() {
                return Err(schema(
                    format!("{pointer}/generators"),
                    "one image per group generator is required",
                ));
            }
            let images: Vec<Perm> = generators
                .iter()
                .map(|c| parse_cycles(c, labels))
                .collect::<Result<_, _>>()
                .map_err(bad)?;
            GModule::permutation(sym.clone(), labels.clone(), &images).map_err(bad)?
        }
        ModuleKind::Matrices {
            labels,
            generators,
            form,
            basis,
            basis_labels,
        } => {
            let mats = generators
                .iter()
                .enumerate()
                .map(|(i, g)| matrix(g, &format!("{pointer}/generators/{i}")))
                .collect::<Result<Vec<_>, _>>()?;
            let form = matrix(form, &format!("{pointer}/form"))?;
            let basis = match basis {
                Some(b) => {
                    let b = matrix(b, &format!("{pointer}/basis"))?;
                    let names = basis_labels
                        .clone()
                        .unwrap_or_else(|| (0..b.cols()).map(|i| format!("b{i}")).collect());
                    Some((b, names))
                }
                None => None,
            };
            GModule::from_matrices(sym.clone(), labels.clone(), &mats, form, basis).map_err(bad)?
        }
    };
    let coords = spec.coordinates.unwrap_or(default);
    let weight = match coords {
        Coordinates::Natural => false,
        Coordinates::Weight => true,
        Coordinates::Auto => sym.order() == 2 && m.is_based(),
    };
    if weight {
        Ok(m.weight_coordinates().map_err(bad)?.0)
    } else {
        Ok(m)
    }
}

/// Builds and validates the tree described by a parsed file.
pub fn build_tree(file: &TreeFile) -> Result<SpacedTree, IoError> {
    if file.vertices.is_empty() {
        return Err(schema("/vertices", "at least two vertices are required"));
    }
    let sym = build_symmetry(&file.group)?;
    let mut modules = BTreeMap::new();
    for (name, spec) in &file.modules {
        modules.insert(
            name.clone(),
            build_module(&sym, spec, file.coordinates, &format!("/modules/{name}"))?,
        );
    }
    let natural = ModuleSpec {
        kind: ModuleKind::Natural,
        coordinates: None,
    };
    let default = build_module(&sym, &natural, file.coordinates, "/group")?;
    let mut vertices = Vec::new();
    for (i, v) in file.vertices.iter().enumerate() {
        let m = match &v.module {
            Some(name) => modules.get(name).cloned().ok_or_else(|| {
                schema(
                    format!("/vertices/{i}/module"),
                    format!("unknown module '{name}'"),
                )
            })?,
            None => default.clone(),
        };
        vertices.push((v.name.clone(), if v.based { m } else { m.unbased() }));
    }
    Ok(SpacedTree::new(sym, vertices, &file.edges)?)
}

pub fn parse_tree(text: &str) -> Result<SpacedTree, IoError> {
    build_tree(&from_json(text)?)
}

pub fn read_tree(path: &std::path::Path) -> Result<SpacedTree, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Input(format!("{}: {e}", path.display())))?;
    parse_tree(&text)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeTensor {
    from: String,
    to: String,
    /// Rows indexed by the coordinates of `from`, columns by those of `to`.
    tensor: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepresentationFile {
    edges: Vec<EdgeTensor>,
}

/// A representation: one tensor per edge in the vertex coordinates.
pub fn parse_representation(
    text: &str,
    t: &SpacedTree,
) -> Result<TreeRepresentation<Scalar>, IoError> {
    let file: RepresentationFile = from_json(text)?;
    let mut a = TreeRepresentation::new();
    for (i, e) in file.edges.iter().enumerate() {
        if !t.has_edge(&e.from, &e.to) {
            return Err(schema(
                format!("/edges/{i}"),
                format!("{}-{} is not an edge", e.from, e.to),
            ));
        }
        a.insert(
            &e.from,
            &e.to,
            matrix(&e.tensor, &format!("/edges/{i}/tensor"))?,
        );
    }
    a.check(t).map_err(|e| schema("/edges", e.to_string()))?;
    Ok(a)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StochasticEdge {
    parent: String,
    child: String,
    /// Rows indexed by the child's basis, columns by the parent's.
    matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StochasticFile {
    root: String,
    root_distribution: Vec<String>,
    edges: Vec<StochasticEdge>,
}

pub fn parse_stochastic(text: &str, t: &SpacedTree) -> Result<StochasticRepresentation, IoError> {
    let file: StochasticFile = from_json(text)?;
    let mut matrices = BTreeMap::new();
    for (i, e) in file.edges.iter().enumerate() {
        matrices.insert(
            (e.parent.clone(), e.child.clone()),
            matrix(&e.matrix, &format!("/edges/{i}/matrix"))?,
        );
    }
    let root_distribution = file
        .root_distribution
        .iter()
        .enumerate()
        .map(|(i, x)| {
            parse_scalar(x).map_err(|e| schema(format!("/root_distribution/{i}"), e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let s = StochasticRepresentation {
        root: file.root,
        matrices,
        root_distribution,
    };
    s.validate(t).map_err(|e| schema("", e.to_string()))?;
    Ok(s)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarFileEntry {
    tree: TreeFile,
    generators: Vec<String>,
    #[serde(default = "yes")]
    complete: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StarFile {
    stars: Vec<StarFileEntry>,
}

/// A table of star ideals; generators are written in the star's own
/// invariant coordinates.
pub fn parse_star_file(text: &str) -> Result<Vec<StarEntry>, IoError> {
    let file: StarFile = from_json(text)?;
    let mut out = Vec::new();
    for (i, entry) in file.stars.iter().enumerate() {
        let star = build_tree(&entry.tree)
            .map_err(|e| schema(format!("/stars/{i}/tree"), e.to_string()))?;
        if star.centre().is_none() {
            return Err(schema(format!("/stars/{i}/tree"), "not a star"));
        }
        let mut vars = var_table(&tree_coordinates(&star));
        let mut set = GeneratorSet::new(vars.clone());
        for (j, g) in entry.generators.iter().enumerate() {
            let p = parse_polynomial(g, &mut vars, false)
                .map_err(|e| schema(format!("/stars/{i}/generators/{j}"), e.to_string()))?;
            set.push(p, Provenance::StarInput);
        }
        set.complete = entry.complete;
        set.canonicalize();
        out.push(StarEntry {
            star,
            generators: set,
        });
    }
    Ok(out)
}

pub fn read_star_file(path: &std::path::Path) -> Result<Vec<StarEntry>, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Input(format!("{}: {e}", path.display())))?;
    parse_star_file(&text)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub polynomial: String,
    pub provenance: String,
}

/// A generator listing as written by the command line.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdealReport {
    pub command: String,
    pub provider: String,
    pub complete: bool,
    pub degree_bound: Option<u32>,
    pub variables: Vec<String>,
    pub generators: Vec<GeneratorRecord>,
    pub sources: Vec<String>,
    /// SHA-256 of the generator texts, one per line.
    pub fingerprint: String,
}

impl IdealReport {
    pub fn new(
        command: &str,
        provider: &str,
        degree_bound: Option<u32>,
        set: &GeneratorSet,
    ) -> Self {
        let texts = set.texts();
        let mut hasher = Sha256::new();
        for t in &texts {
            hasher.update(t.as_bytes());
            hasher.update(b"\n");
        }
        IdealReport {
            command: command.into(),
            provider: provider.into(),
            complete: set.complete,
            degree_bound: if set.complete { None } else { degree_bound },
            variables: set.vars.labels().iter().map(|l| l.to_string()).collect(),
            generators: texts
                .into_iter()
                .zip(&set.generators)
                .map(|(polynomial, g)| GeneratorRecord {
                    polynomial,
                    provenance: g.provenance.tag().into(),
                })
                .collect(),
            sources: set.sources.clone(),
            fingerprint: hex::encode(hasher.finalize()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {} via {}; {} generators",
            self.command,
            self.provider,
            self.generators.len()
        ));
        match (self.complete, self.degree_bound) {
            (true, _) => out.push_str("; complete\n"),
            (false, Some(d)) => out.push_str(&format!("; complete up to degree {d} only\n")),
            (false, None) => out.push_str("; not known to be complete\n"),
        }
        for s in &self.sources {
            out.push_str(&format!("# {s}\n"));
        }
        for g in &self.generators {
            out.push_str(&format!("{}\t{}\n", g.polynomial, g.provenance));
        }
        out.push_str(&format!("# sha256 {}\n", self.fingerprint));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_star_file() {
        let t = parse_tree(
            r#"{"group": "K81", "vertices": [{"name": "c"}, {"name": "1"}, {"name": "2"}, {"name": "3"}],
                "edges": [["c", "1"], ["c", "2"], ["c", "3"]]}"#,
        )
        .unwrap();
        assert_eq!(t.symmetry().order(), 4);
        assert_eq!(t.leaves().len(), 3);
        assert_eq!(tree_coordinates(&t).dim(), 16);
    }

    #[test]
    fn schema_errors_have_pointers() {
        let e = parse_tree(r#"{"group": "K81", "vertices": [], "edges": []}"#).unwrap_err();
        assert!(
            matches!(e, IoError::Schema { ref pointer, .. } if pointer == "/vertices"),
            "{e}"
        );
        let e =
            parse_tree(r#"{"group": "K81", "vertices": [{"name": 3}], "edges": []}"#).unwrap_err();
        assert!(
            matches!(e, IoError::Schema { ref pointer, .. } if pointer == "/vertices/0/name"),
            "{e}"
        );
        assert!(matches!(parse_tree("{"), Err(IoError::Parse(_))));
        let e = parse_tree(r#"{"group": "XYZ", "vertices": [{"name": "a"}, {"name": "b"}], "edges": [["a", "b"]]}"#).unwrap_err();
        assert!(
            matches!(e, IoError::Schema { ref pointer, .. } if pointer == "/group"),
            "{e}"
        );
    }

    #[test]
    fn unbased_leaves_and_modules() {
        let t = parse_tree(
            r#"{"group": {"labels": ["1", "x"], "generators": ["(1 x)"]},
                "modules": {"K": {"kind": "regular", "coordinates": "weight"}},
                "vertices": [{"name": "c", "module": "K"}, {"name": "1", "module": "K", "based": false}, {"name": "2", "module": "K"}],
                "edges": [["c", "1"], ["c", "2"]]}"#,
        )
        .unwrap();
        assert_eq!(t.module("c").labels(), ["t", "s"]);
        assert!(!t.module("1").is_based());
    }

    #[test]
    fn report_fingerprint_is_stable() {
        let t = presets::z2_star(4).unwrap();
        let set = crate::ideal::StarIdealProvider::builtin()
            .star_ideal(&t)
            .unwrap();
        let a = IdealReport::new("ideal", "builtin", Some(2), &set);
        let b = IdealReport::new("ideal", "builtin", Some(2), &set);
        assert_eq!(a, b);
        assert_eq!(a.fingerprint.len(), 64);
        assert!(a.to_text().contains("complete\n"));
        let back: IdealReport = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
