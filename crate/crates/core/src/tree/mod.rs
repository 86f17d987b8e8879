//! Spaced trees: finite trees with a G-module at every vertex.
//!
//! Vertices are identified by name. Leaves are ordered by name, and that
//! order fixes the factor order of the leaf space.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::grouprep::{GModule, GroupError, Symmetry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("a tree needs at least two vertices")]
    TooSmall,
    #[error("duplicate vertex '{0}'")]
    DuplicateVertex(String),
    #[error("edge {0}-{1} mentions an unknown vertex")]
    UnknownVertex(String, String),
    #[error("edge {0}-{1} is a loop or repeated")]
    BadEdge(String, String),
    #[error("vertex '{0}' is not connected to the rest of the tree")]
    Disconnected(String),
    #[error("the edges contain a cycle")]
    Cycle,
    #[error("internal vertex '{0}' has no distinguished basis")]
    NotBased(String),
    #[error("vertex '{0}' uses a module over a different group")]
    GroupMismatch(String),
    #[error("vertex '{0}' is not internal")]
    NotInternal(String),
    #[error("no vertex named '{0}'")]
    NoSuchVertex(String),
    #[error("{0}-{1} is not an edge")]
    NotAnEdge(String, String),
    #[error("vertex name '{0}' is used twice")]
    NameCollision(String),
    #[error("modules at shared vertex '{0}' differ")]
    ModuleMismatch(String),
    #[error("module at '{0}': {1}")]
    Module(String, GroupError),
}

#[derive(Clone, Debug)]
pub struct SpacedTree {
    sym: Arc<Symmetry>,
    modules: BTreeMap<String, GModule>,
    adj: BTreeMap<String, BTreeSet<String>>,
}

impl SpacedTree {
    /// Builds and validates a tree.
    pub fn new(
        sym: Arc<Symmetry>,
        vertices: Vec<(String, GModule)>,
        edges: &[(String, String)],
    ) -> Result<Self, TreeError> {
        let mut modules = BTreeMap::new();
        for (name, m) in vertices {
            if modules.insert(name.clone(), m).is_some() {
                return Err(TreeError::DuplicateVertex(name));
            }
        }
        let mut adj: BTreeMap<String, BTreeSet<String>> = modules
            .keys()
            .map(|k| (k.clone(), BTreeSet::new()))
            .collect();
        for (a, b) in edges {
            if !modules.contains_key(a) || !modules.contains_key(b) {
                return Err(TreeError::UnknownVertex(a.clone(), b.clone()));
            }
            if a == b || !adj.get_mut(a).unwrap().insert(b.clone()) {
                return Err(TreeError::BadEdge(a.clone(), b.clone()));
            }
            adj.get_mut(b).unwrap().insert(a.clone());
        }
        let t = SpacedTree { sym, modules, adj };
        t.validate()?;
        Ok(t)
    }

    /// Checks connectivity, acyclicity, group consistency and that every
    /// internal vertex is based.
    pub fn validate(&self) -> Result<(), TreeError> {
        if self.modules.len() < 2 {
            return Err(TreeError::TooSmall);
        }
        let edge_count: usize = self.adj.values().map(|s| s.len()).sum::<usize>() / 2;
        let first = self.modules.keys().next().unwrap();
        let reached = self.component(first, None);
        if let Some(v) = self.modules.keys().find(|v| !reached.contains(*v)) {
            return Err(TreeError::Disconnected(v.clone()));
        }
        if edge_count != self.modules.len() - 1 {
            return Err(TreeError::Cycle);
        }
        for (name, m) in &self.modules {
            if !(Arc::ptr_eq(m.symmetry(), &self.sym) || **m.symmetry() == *self.sym) {
                return Err(TreeError::GroupMismatch(name.clone()));
            }
            m.validate()
                .map_err(|e| TreeError::Module(name.clone(), e))?;
            if self.valency(name) >= 2 && !m.is_based() {
                return Err(TreeError::NotBased(name.clone()));
            }
        }
        Ok(())
    }

    /// Vertices reachable from `start` without entering `blocked`.
    fn component(&self, start: &str, blocked: Option<&str>) -> BTreeSet<String> {
        let mut seen = BTreeSet::from([start.to_string()]);
        let mut queue = VecDeque::from([start.to_string()]);
        while let Some(v) = queue.pop_front() {
            for w in &self.adj[&v] {
                if Some(w.as_str()) != blocked && seen.insert(w.clone()) {
                    queue.push_back(w.clone());
                }
            }
        }
        seen
    }

    fn induced(&self, vertices: &BTreeSet<String>) -> SpacedTree {
        let modules = vertices
            .iter()
            .map(|v| (v.clone(), self.modules[v].clone()))
            .collect();
        let adj = vertices
            .iter()
            .map(|v| {
                (
                    v.clone(),
                    self.adj[v]
                        .iter()
                        .filter(|w| vertices.contains(*w))
                        .cloned()
                        .collect(),
                )
            })
            .collect();
        SpacedTree {
            sym: self.sym.clone(),
            modules,
            adj,
        }
    }

    pub fn symmetry(&self) -> &Arc<Symmetry> {
        &self.sym
    }

    pub fn vertex_count(&self) -> usize {
        self.modules.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &String> {
        self.modules.keys()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.modules.contains_key(v)
    }

    pub fn module(&self, v: &str) -> &GModule {
        &self.modules[v]
    }

    pub fn neighbors(&self, v: &str) -> &BTreeSet<String> {
        &self.adj[v]
    }

    pub fn valency(&self, v: &str) -> usize {
        self.adj[v].len()
    }

    pub fn is_leaf(&self, v: &str) -> bool {
        self.valency(v) == 1
    }

    /// Leaves in name order.
    pub fn leaves(&self) -> Vec<String> {
        self.modules
            .keys()
            .filter(|v| self.is_leaf(v))
            .cloned()
            .collect()
    }

    pub fn internal(&self) -> Vec<String> {
        self.modules
            .keys()
            .filter(|v| !self.is_leaf(v))
            .cloned()
            .collect()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (a, ns) in &self.adj {
            for b in ns {
                if a < b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(b))
    }

    /// The centre, when the tree is a star with at least two leaves.
    pub fn centre(&self) -> Option<String> {
        match self.internal().as_slice() {
            [q] => Some(q.clone()),
            _ => None,
        }
    }

    pub fn leaf_modules(&self) -> Vec<&GModule> {
        self.leaves().iter().map(|v| &self.modules[v]).collect()
    }

    pub fn leaf_dims(&self) -> Vec<usize> {
        self.leaf_modules().iter().map(|m| m.dim()).collect()
    }

    /// `dim L(T)`.
    pub fn leaf_space_dim(&self) -> usize {
        self.leaf_dims().iter().product()
    }

    /// The leaf space as a module.
    pub fn leaf_space(&self) -> GModule {
        GModule::tensor(&self.leaf_modules()).expect("modules share the group")
    }

    /// The branch around `q` containing its neighbour `p`; `q` is a leaf of it.
    pub fn branch(&self, q: &str, p: &str) -> Result<SpacedTree, TreeError> {
        if !self.has_edge(q, p) {
            return Err(TreeError::NotAnEdge(q.into(), p.into()));
        }
        let mut vs = self.component(p, Some(q));
        vs.insert(q.to_string());
        Ok(self.induced(&vs))
    }

    /// One branch per neighbour of the internal vertex `q`, in neighbour order.
    pub fn branches_at(&self, q: &str) -> Result<Vec<SpacedTree>, TreeError> {
        if !self.contains(q) {
            return Err(TreeError::NoSuchVertex(q.into()));
        }
        if self.is_leaf(q) {
            return Err(TreeError::NotInternal(q.into()));
        }
        self.adj[q].iter().map(|p| self.branch(q, p)).collect()
    }

    /// Glues trees along a common leaf `q`.
    pub fn glue(trees: &[SpacedTree], q: &str) -> Result<SpacedTree, TreeError> {
        let Some(first) = trees.first() else {
            return Err(TreeError::TooSmall);
        };
        let mut modules: BTreeMap<String, GModule> = BTreeMap::new();
        let mut edges = Vec::new();
        for t in trees {
            if !t.contains(q) || (trees.len() > 1 && !t.is_leaf(q)) {
                return Err(TreeError::NotAnEdge(q.into(), "glued tree".into()));
            }
            if t.module(q) != first.module(q) {
                return Err(TreeError::ModuleMismatch(q.into()));
            }
            for (v, m) in &t.modules {
                if v != q && modules.contains_key(v) {
                    return Err(TreeError::NameCollision(v.clone()));
                }
                modules.insert(v.clone(), m.clone());
            }
            edges.extend(t.edges());
        }
        SpacedTree::new(first.sym.clone(), modules.into_iter().collect(), &edges)
    }

    /// The connected components of `T - q`, each as its set of leaves of `T`
    /// (in name order), ordered by smallest member.
    pub fn leaf_classes(&self, q: &str) -> Vec<Vec<String>> {
        let leaves: BTreeSet<String> = self.leaves().into_iter().collect();
        let mut classes: Vec<Vec<String>> = self.adj[q]
            .iter()
            .map(|p| {
                self.component(p, Some(q))
                    .into_iter()
                    .filter(|v| leaves.contains(v) && v != q)
                    .collect()
            })
            .collect();
        classes.retain(|c: &Vec<String>| !c.is_empty());
        classes.sort();
        classes
    }

    /// The flattening at `q`: a star with centre `q` and one leaf per
    /// component of `T - q`, carrying the tensor product of that
    /// component's leaf modules. Class leaves are named by joining their
    /// members with `+`. Returns the star and its classes in leaf order.
    pub fn flatten_at(&self, q: &str) -> Result<(SpacedTree, Vec<Vec<String>>), TreeError> {
        if !self.contains(q) {
            return Err(TreeError::NoSuchVertex(q.into()));
        }
        if self.is_leaf(q) {
            // The other component holds every remaining leaf.
            let rest: Vec<String> = self.leaves().into_iter().filter(|v| v != q).collect();
            let name = rest.join("+");
            if name == q {
                return Err(TreeError::NameCollision(name));
            }
            let m = self.class_module(&rest)?;
            let t = SpacedTree::new(
                self.sym.clone(),
                vec![(q.to_string(), self.modules[q].clone()), (name.clone(), m)],
                &[(q.to_string(), name)],
            )?;
            return Ok((t, vec![vec![q.to_string()], rest]));
        }
        let classes = self.leaf_classes(q);
        let mut vertices = vec![(q.to_string(), self.modules[q].clone())];
        let mut edges = Vec::new();
        for c in &classes {
            let name = c.join("+");
            if name == q {
                return Err(TreeError::NameCollision(name));
            }
            vertices.push((name.clone(), self.class_module(c)?));
            edges.push((q.to_string(), name));
        }
        let t = SpacedTree::new(self.sym.clone(), vertices, &edges)?;
        // Class names sort the same way as the classes themselves unless a
        // name contains '+'; return the classes in the star's leaf order.
        let order = t.leaves();
        let mut sorted = classes.clone();
        sorted.sort_by_key(|c| order.iter().position(|n| *n == c.join("+")));
        let mut with_centre = sorted;
        if t.is_leaf(q) {
            with_centre.insert(
                order.iter().position(|n| n == q).unwrap(),
                vec![q.to_string()],
            );
        }
        Ok((t, with_centre))
    }

    fn class_module(&self, members: &[String]) -> Result<GModule, TreeError> {
        let ms: Vec<&GModule> = members.iter().map(|v| &self.modules[v]).collect();
        GModule::tensor(&ms).map_err(|e| TreeError::Module(members.join("+"), e))
    }

    /// A vertex name not used in the tree, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.contains(&name) {
            name.push('\'');
        }
        name
    }

    /// Replaces the edge `p - r` by a path `p - q1 - q2 - r` with
    /// `V_q1 = V_r` and `V_q2 = V_p`. Returns the tree and the new names.
    pub fn insert_valency2(
        &self,
        p: &str,
        r: &str,
    ) -> Result<(SpacedTree, String, String), TreeError> {
        if !self.has_edge(p, r) {
            return Err(TreeError::NotAnEdge(p.into(), r.into()));
        }
        for v in [p, r] {
            if !self.modules[v].is_based() {
                return Err(TreeError::NotBased(v.into()));
            }
        }
        let mut q1 = self.fresh_name("q1");
        let mut q2 = self.fresh_name("q2");
        // Keep the names distinct and in the order q1 < q2.
        while q2 <= q1 || self.contains(&q2) {
            q2.push('\'');
        }
        while self.contains(&q1) {
            q1.push('\'');
        }
        let mut vertices: Vec<(String, GModule)> = self
            .modules
            .iter()
            .map(|(k, m)| (k.clone(), m.clone()))
            .collect();
        vertices.push((q1.clone(), self.modules[r].clone()));
        vertices.push((q2.clone(), self.modules[p].clone()));
        let mut edges: Vec<(String, String)> = self
            .edges()
            .into_iter()
            .filter(|(a, b)| !((a == p && b == r) || (a == r && b == p)))
            .collect();
        edges.push((p.to_string(), q1.clone()));
        edges.push((q1.clone(), q2.clone()));
        edges.push((q2.clone(), r.to_string()));
        Ok((SpacedTree::new(self.sym.clone(), vertices, &edges)?, q1, q2))
    }

    /// The substar at each vertex: the vertex with its neighbours.
    pub fn substars(&self) -> Vec<(String, SpacedTree)> {
        self.modules
            .keys()
            .map(|v| {
                let mut vs: BTreeSet<String> = self.adj[v].clone();
                vs.insert(v.clone());
                (v.clone(), self.induced(&vs))
            })
            .collect()
    }

    /// Number of substars with at least three leaves.
    pub fn large_substar_count(&self) -> usize {
        self.modules.keys().filter(|v| self.valency(v) >= 3).count()
    }

    /// Attaches a new leaf `r'` to the internal vertex `r` with `V_r' = V_r`.
    pub fn root_extend(&self, r: &str) -> Result<(SpacedTree, String), TreeError> {
        if !self.contains(r) {
            return Err(TreeError::NoSuchVertex(r.into()));
        }
        if self.is_leaf(r) {
            return Err(TreeError::NotInternal(r.into()));
        }
        let name = self.fresh_name(&format!("{r}'"));
        let mut vertices: Vec<(String, GModule)> = self
            .modules
            .iter()
            .map(|(k, m)| (k.clone(), m.clone()))
            .collect();
        vertices.push((name.clone(), self.modules[r].clone()));
        let mut edges = self.edges();
        edges.push((r.to_string(), name.clone()));
        Ok((SpacedTree::new(self.sym.clone(), vertices, &edges)?, name))
    }

    /// Same shape with every module replaced.
    pub fn map_modules(
        &self,
        f: impl Fn(&str, &GModule) -> Result<GModule, TreeError>,
    ) -> Result<SpacedTree, TreeError> {
        let vertices = self
            .modules
            .iter()
            .map(|(k, m)| Ok((k.clone(), f(k, m)?)))
            .collect::<Result<Vec<_>, TreeError>>()?;
        SpacedTree::new(self.sym.clone(), vertices, &self.edges())
    }

    /// Structural equality: same names, edges and modules.
    pub fn same_as(&self, other: &SpacedTree) -> bool {
        self.adj == other.adj && self.modules == other.modules
    }
}
