//! Sources of generators for the ideals of stars.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::assembly::pullback_star_ideal;
use super::linear::{linear_forms, substitute_all, transport_columns};
use super::oracle::{degree_bounded_vanishing_ideal, OracleConfig};
use super::{describe_star, tree_coordinates, var_table, GeneratorSet, IdealError, Provenance};
use crate::algebra::text::parse_polynomial;
use crate::grouprep::GModule;
use crate::model::{psi, random_representation, LeafTensor};
use crate::tree::SpacedTree;
use crate::Mat;

/// Generators for one star, as read from a file.
#[derive(Clone, Debug)]
pub struct StarEntry {
    pub star: SpacedTree,
    pub generators: GeneratorSet,
}

/// Resolves star ideals from, in order: user entries, the built-in table,
/// and (when enabled) the degree-bounded oracle.
#[derive(Clone, Debug)]
pub struct StarIdealProvider {
    pub entries: Vec<StarEntry>,
    pub builtin: bool,
    pub oracle: Option<OracleConfig>,
    pub name: String,
}

impl StarIdealProvider {
    pub fn builtin() -> Self {
        StarIdealProvider {
            entries: Vec::new(),
            builtin: true,
            oracle: None,
            name: "builtin".into(),
        }
    }

    /// The built-in table, falling back to the oracle.
    pub fn oracle(config: OracleConfig) -> Self {
        StarIdealProvider {
            entries: Vec::new(),
            builtin: true,
            oracle: Some(config),
            name: "oracle".into(),
        }
    }

    /// User entries, then the built-in table.
    pub fn with_entries(entries: Vec<StarEntry>, name: impl Into<String>) -> Self {
        StarIdealProvider {
            entries,
            builtin: true,
            oracle: None,
            name: name.into(),
        }
    }

    pub fn star_ideal(&self, s: &SpacedTree) -> Result<GeneratorSet, IdealError> {
        if s.vertex_count() == 2 {
            return Ok(GeneratorSet::new(var_table(&tree_coordinates(s))));
        }
        if s.centre().is_none() {
            return Err(IdealError::Invalid("star ideals need a star".into()));
        }
        for e in &self.entries {
            if let Some(mut set) = match_entry(e, s)? {
                set.sources.push(format!("{}: file", describe_star(s)));
                return Ok(set);
            }
        }
        if self.builtin {
            if let Some(mut set) = builtin_star(s)? {
                set.sources.push(format!("{}: builtin", describe_star(s)));
                return Ok(set);
            }
        }
        if let Some(config) = &self.oracle {
            let mut set = degree_bounded_vanishing_ideal(s, config)?;
            set.sources.push(format!(
                "{}: oracle up to degree {}",
                describe_star(s),
                config.degree
            ));
            return Ok(set);
        }
        Err(IdealError::UnresolvedStar(describe_star(s)))
    }
}

/// Same action, form and distinguished basis; labels may differ.
fn same_structure(a: &GModule, b: &GModule) -> bool {
    a.dim() == b.dim()
        && a.group().order() == b.group().order()
        && a.form() == b.form()
        && a.basis() == b.basis()
        && (0..a.group().order()).all(|g| a.action(g) == b.action(g))
}

/// Leaf bijections from `e` to `s` preserving module structure, by search.
fn leaf_bijection(e: &SpacedTree, s: &SpacedTree) -> Option<Vec<usize>> {
    let el = e.leaves();
    let sl = s.leaves();
    if el.len() != sl.len() {
        return None;
    }
    fn search(
        k: usize,
        el: &[String],
        sl: &[String],
        e: &SpacedTree,
        s: &SpacedTree,
        used: &mut Vec<bool>,
        out: &mut Vec<usize>,
    ) -> bool {
        if k == el.len() {
            return true;
        }
        for j in 0..sl.len() {
            if !used[j] && same_structure(e.module(&el[k]), s.module(&sl[j])) {
                used[j] = true;
                out.push(j);
                if search(k + 1, el, sl, e, s, used, out) {
                    return true;
                }
                out.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut out = Vec::new();
    search(0, &el, &sl, e, s, &mut vec![false; sl.len()], &mut out).then_some(out)
}

fn match_entry(e: &StarEntry, s: &SpacedTree) -> Result<Option<GeneratorSet>, IdealError> {
    let (Some(ec), Some(sc)) = (e.star.centre(), s.centre()) else {
        return Ok(None);
    };
    if e.star.symmetry().group() != s.symmetry().group()
        || !same_structure(e.star.module(&ec), s.module(&sc))
    {
        return Ok(None);
    }
    let Some(perm) = leaf_bijection(&e.star, s) else {
        return Ok(None);
    };
    Ok(Some(transport_by_leaves(&e.star, &e.generators, s, &perm)))
}

/// Moves generators on `e` to `s`, where leaf `k` of `e` corresponds to
/// leaf `perm[k]` of `s` and corresponding modules agree.
fn transport_by_leaves(
    e: &SpacedTree,
    gens: &GeneratorSet,
    s: &SpacedTree,
    perm: &[usize],
) -> GeneratorSet {
    let el = e.leaves();
    let sl = s.leaves();
    // Name the factors of s by the matching leaves of e, then reorder.
    let mut renamed = vec![String::new(); sl.len()];
    for (k, &j) in perm.iter().enumerate() {
        renamed[j] = el[k].clone();
    }
    let source = tree_coordinates(s);
    let target = tree_coordinates(e);
    let dims = s.leaf_dims();
    let columns = transport_columns(&source, &target, |v| {
        LeafTensor::new(renamed.clone(), dims.clone(), v)
            .permuted(&el)
            .into_data()
    });
    let images = linear_forms(&columns, target.dim(), 0);
    let mut out = GeneratorSet::new(var_table(&source));
    for g in &gens.generators {
        out.push(
            substitute_all(std::slice::from_ref(&g.poly), &images).remove(0),
            g.provenance,
        );
    }
    out.absorb_status(gens);
    out.canonicalize();
    out
}

/// The group-of-order-2 stars with every module the regular module, in
/// weight coordinates (labels `t`, `s`) or the natural basis.
fn builtin_star(s: &SpacedTree) -> Result<Option<GeneratorSet>, IdealError> {
    let sym = s.symmetry().clone();
    if sym.order() != 2 {
        return Ok(None);
    }
    let natural = GModule::regular(sym.clone());
    let (weight, to_natural) = natural.weight_coordinates()?;
    let centre = s.centre().expect("checked by caller");
    let leaves = s.leaves();
    let n = leaves.len();
    if !(3..=4).contains(&n) {
        return Ok(None);
    }
    let c = s.module(&centre);
    if !same_structure(c, &natural) && !same_structure(c, &weight) {
        return Ok(None);
    }
    let mut tau = BTreeMap::new();
    let to_weight: Mat = to_natural.inverse()?;
    for leaf in &leaves {
        let m = s.module(leaf);
        if same_structure(m, &weight) {
            tau.insert(leaf.clone(), Mat::identity(2));
        } else if same_structure(m, &natural) {
            tau.insert(leaf.clone(), to_weight.clone());
        } else {
            return Ok(None);
        }
    }
    // The reference star on the same leaf names, all in weight coordinates.
    let mut vertices = vec![(centre.clone(), weight.clone())];
    vertices.extend(leaves.iter().map(|l| (l.clone(), weight.clone())));
    let edges: Vec<(String, String)> = leaves.iter().map(|l| (centre.clone(), l.clone())).collect();
    let reference = SpacedTree::new(sym, vertices, &edges)?;
    let coords = tree_coordinates(&reference);
    let mut vars = var_table(&coords);
    let mut set = GeneratorSet::new(vars.clone());
    if n == 4 {
        let texts = [
            "z[t,t,t,t]*z[s,s,s,s] - z[s,s,t,t]*z[t,t,s,s]",
            "z[t,t,t,t]*z[s,s,s,s] - z[s,t,s,t]*z[t,s,t,s]",
            "z[t,t,t,t]*z[s,s,s,s] - z[s,t,t,s]*z[t,s,s,t]",
        ];
        for text in texts {
            set.push(
                parse_polynomial(text, &mut vars, false)?,
                Provenance::StarInput,
            );
        }
        verify_on_samples(&reference, &set)?;
    }
    set.canonicalize();
    Ok(Some(
        pullback_star_ideal(&reference, &set, s, &tau)?.with_provenance(Provenance::StarInput),
    ))
}

fn verify_on_samples(t: &SpacedTree, set: &GeneratorSet) -> Result<(), IdealError> {
    let coords = tree_coordinates(t);
    for seed in 0..3 {
        let point =
            coords.coords(&psi(t, &random_representation(t, 0xb17 + seed, true, 7)).into_data());
        for g in &set.generators {
            if !g.poly.eval(&point)?.is_zero() {
                return Err(IdealError::Invalid(format!(
                    "built-in generator {} fails on a sample",
                    g.poly.display(&set.vars)
                )));
            }
        }
    }
    Ok(())
}

impl GeneratorSet {
    pub(crate) fn with_provenance(mut self, p: Provenance) -> Self {
        for g in &mut self.generators {
            g.provenance = p;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{FiniteGroup, Symmetry};

    fn z2_star(n: usize, weight: bool) -> SpacedTree {
        let sym =
            Symmetry::new(FiniteGroup::from_cycles(&["e", "x"], &["(e x)"]).unwrap()).unwrap();
        let m = GModule::natural(sym.clone());
        let m = if weight {
            m.weight_coordinates().unwrap().0
        } else {
            m
        };
        let mut vs = vec![("c".to_string(), m.clone())];
        let mut es = Vec::new();
        for i in 1..=n {
            vs.push((i.to_string(), m.clone()));
            es.push(("c".to_string(), i.to_string()));
        }
        SpacedTree::new(sym, vs, &es).unwrap()
    }

    #[test]
    fn builtin_four_star() {
        let s = z2_star(4, true);
        let set = StarIdealProvider::builtin().star_ideal(&s).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.complete);
        assert_eq!(
            set.texts(),
            vec![
                "z[t,t,t,t]*z[s,s,s,s] - z[t,s,s,t]*z[s,t,t,s]",
                "z[t,t,t,t]*z[s,s,s,s] - z[t,s,t,s]*z[s,t,s,t]",
                "z[t,t,t,t]*z[s,s,s,s] - z[t,t,s,s]*z[s,s,t,t]",
            ]
        );
        assert!(StarIdealProvider::builtin()
            .star_ideal(&z2_star(3, true))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn natural_coordinates_are_pulled_back() {
        let s = z2_star(4, false);
        let set = StarIdealProvider::builtin().star_ideal(&s).unwrap();
        assert_eq!(set.len(), 3);
        verify_on_samples(&s, &set).unwrap();
    }

    #[test]
    fn unresolved_without_oracle() {
        let sym = Symmetry::new(
            FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A C G T)", "(A C)"]).unwrap(),
        )
        .unwrap();
        let m = GModule::natural(sym.clone());
        let vs = ["r", "1", "2", "3"]
            .iter()
            .map(|n| (n.to_string(), m.clone()))
            .collect();
        let es: Vec<(String, String)> = ["1", "2", "3"]
            .iter()
            .map(|l| ("r".to_string(), l.to_string()))
            .collect();
        let s = SpacedTree::new(sym, vs, &es).unwrap();
        assert!(matches!(
            StarIdealProvider::builtin().star_ideal(&s),
            Err(IdealError::UnresolvedStar(_))
        ));
    }
}
