//! Edge tensors of a tree, and random sampling of them.

use std::collections::BTreeMap;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModelError;
use crate::algebra::{Field, Matrix, Ring};
use crate::grouprep::GModule;
use crate::tree::SpacedTree;
use crate::{Mat, Rational, Scalar};

/// One tensor per edge, stored in `V_a (x) V_b` with `a < b` as a
/// `dim V_a x dim V_b` matrix of coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeRepresentation<E> {
    edges: BTreeMap<(String, String), Matrix<E>>,
}

impl<E: Ring> Default for TreeRepresentation<E> {
    fn default() -> Self {
        TreeRepresentation {
            edges: BTreeMap::new(),
        }
    }
}

impl<E: Ring> TreeRepresentation<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the tensor of edge `a - b`, given in `V_a (x) V_b`.
    pub fn insert(&mut self, a: &str, b: &str, m: Matrix<E>) {
        if a < b {
            self.edges.insert((a.to_string(), b.to_string()), m);
        } else {
            self.edges
                .insert((b.to_string(), a.to_string()), m.transpose());
        }
    }

    /// The tensor of edge `a - b` in `V_a (x) V_b`.
    pub fn get(&self, a: &str, b: &str) -> Matrix<E> {
        if a < b {
            self.edges[&(a.to_string(), b.to_string())].clone()
        } else {
            self.edges[&(b.to_string(), a.to_string())].transpose()
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(String, String), &Matrix<E>)> {
        self.edges.iter()
    }

    /// Checks that every edge of `t` has a tensor of the right shape.
    pub fn check(&self, t: &SpacedTree) -> Result<(), ModelError> {
        for (a, b) in t.edges() {
            let m = self
                .edges
                .get(&(a.clone(), b.clone()))
                .ok_or_else(|| ModelError::Edge(a.clone(), b.clone(), "missing tensor".into()))?;
            if m.rows() != t.module(&a).dim() || m.cols() != t.module(&b).dim() {
                return Err(ModelError::Edge(
                    a,
                    b,
                    format!("tensor is {} x {}", m.rows(), m.cols()),
                ));
            }
        }
        Ok(())
    }
}

/// A uniform rational with numerator in `[-h, h]` and denominator in `[1, h]`.
pub fn random_scalar(rng: &mut ChaCha8Rng, height: i64) -> Scalar {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=height);
    Scalar::frac(n, d)
}

/// `(1/|G|) sum_g M_a(g) A M_b(g)^T`, the projection onto G-fixed tensors.
pub fn equivariant_projection(ma: &GModule, mb: &GModule, a: &Mat) -> Mat {
    let group = ma.group();
    let mut acc = Matrix::zeros(a.rows(), a.cols());
    for g in 0..group.order() {
        let left = ma.action(g).to_dense().mul(a);
        let term = mb.action(g).to_dense().mul(&left.transpose()).transpose();
        acc = acc.add(&term);
    }
    let inv = Scalar::frac(1, group.order() as i64);
    acc.map(|x| x.mul_ref(&inv))
}

pub fn random_representation_with(
    t: &SpacedTree,
    rng: &mut ChaCha8Rng,
    equivariant: bool,
    height: i64,
) -> TreeRepresentation<Scalar> {
    let mut rep = TreeRepresentation::new();
    for (a, b) in t.edges() {
        let (ma, mb) = (t.module(&a), t.module(&b));
        let raw = Matrix::from_fn(ma.dim(), mb.dim(), |_, _| random_scalar(rng, height));
        let m = if equivariant {
            equivariant_projection(ma, mb, &raw)
        } else {
            raw
        };
        rep.insert(&a, &b, m);
    }
    rep
}

/// A seeded random representation; entries have height at most `height`
/// before projection.
pub fn random_representation(
    t: &SpacedTree,
    seed: u64,
    equivariant: bool,
    height: i64,
) -> TreeRepresentation<Scalar> {
    random_representation_with(t, &mut ChaCha8Rng::seed_from_u64(seed), equivariant, height)
}

/// Transition matrices directed away from a root, in distinguished bases,
/// together with a root distribution.
///
/// The matrix of edge `(parent, child)` has rows indexed by the child's
/// basis and columns by the parent's basis, so columns sum to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticRepresentation {
    pub root: String,
    pub matrices: BTreeMap<(String, String), Mat>,
    pub root_distribution: Vec<Scalar>,
}

fn is_nonnegative_rational(x: &Scalar) -> bool {
    x.as_rat().is_some_and(|q| !q.is_negative())
}

impl StochasticRepresentation {
    /// Edges of `t` oriented away from `root`, in breadth-first order.
    pub fn oriented_edges(t: &SpacedTree, root: &str) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::from([(root.to_string(), None::<String>)]);
        while let Some((v, parent)) = queue.pop_front() {
            for w in t.neighbors(&v) {
                if Some(w) != parent.as_ref() {
                    out.push((v.clone(), w.clone()));
                    queue.push_back((w.clone(), Some(v.clone())));
                }
            }
        }
        out
    }

    /// Checks orientation, shapes, stochasticity and the root distribution.
    pub fn validate(&self, t: &SpacedTree) -> Result<(), ModelError> {
        if !t.contains(&self.root) {
            return Err(ModelError::Invalid(format!(
                "root '{}' is not a vertex",
                self.root
            )));
        }
        for v in t.vertices() {
            if !t.module(v).is_based() {
                return Err(ModelError::NotBased(v.clone()));
            }
        }
        let oriented = Self::oriented_edges(t, &self.root);
        if oriented.len() != self.matrices.len() {
            return Err(ModelError::Invalid(format!(
                "expected {} edge matrices, got {}",
                oriented.len(),
                self.matrices.len()
            )));
        }
        for (p, c) in oriented {
            let m = self.matrices.get(&(p.clone(), c.clone())).ok_or_else(|| {
                ModelError::Edge(
                    p.clone(),
                    c.clone(),
                    "missing, or not directed away from the root".into(),
                )
            })?;
            if m.rows() != t.module(&c).dim() || m.cols() != t.module(&p).dim() {
                return Err(ModelError::Edge(
                    p,
                    c,
                    format!("matrix is {} x {}", m.rows(), m.cols()),
                ));
            }
            for j in 0..m.cols() {
                let col = m.column(j);
                if !col.iter().all(is_nonnegative_rational) {
                    return Err(ModelError::Edge(
                        p,
                        c,
                        format!("column {j} has a negative or irrational entry"),
                    ));
                }
                let sum = col.iter().fold(Scalar::zero(), |acc, x| acc.add_ref(x));
                if !sum.is_one() {
                    return Err(ModelError::Edge(p, c, format!("column {j} sums to {sum}")));
                }
            }
        }
        let pi = &self.root_distribution;
        if pi.len() != t.module(&self.root).dim() {
            return Err(ModelError::RootDistribution(format!(
                "has {} entries",
                pi.len()
            )));
        }
        let sum = pi.iter().fold(Scalar::zero(), |acc, x| acc.add_ref(x));
        if !sum.is_one() {
            return Err(ModelError::RootDistribution(format!("sums to {sum}")));
        }
        Ok(())
    }

    /// Edge tensors `B_c M B_p^T` in module coordinates.
    pub fn to_representation(&self, t: &SpacedTree) -> TreeRepresentation<Scalar> {
        let mut rep = TreeRepresentation::new();
        for ((p, c), m) in &self.matrices {
            let bp = t.module(p).basis().expect("validated");
            let bc = t.module(c).basis().expect("validated");
            rep.insert(c, p, bc.mul(m).mul(&bp.transpose()));
        }
        rep
    }

    /// The representation obtained by composing `diag(pi)` onto the edge
    /// from the root to its first neighbour.
    pub fn bridge(&self, t: &SpacedTree) -> TreeRepresentation<Scalar> {
        let first = t
            .neighbors(&self.root)
            .iter()
            .next()
            .expect("root has a neighbour")
            .clone();
        let mut modified = self.clone();
        let key = (self.root.clone(), first);
        let m = &self.matrices[&key];
        let scaled = Matrix::from_fn(m.rows(), m.cols(), |i, j| {
            m[(i, j)].mul_ref(&self.root_distribution[j])
        });
        modified.matrices.insert(key, scaled);
        modified.to_representation(t)
    }

    /// Random column-stochastic matrices with positive entries and a random
    /// positive root distribution. With `equivariant`, matrices are
    /// averaged over the group acting by basis permutations; the root
    /// distribution is left arbitrary.
    pub fn random(
        t: &SpacedTree,
        root: &str,
        rng: &mut ChaCha8Rng,
        equivariant: bool,
    ) -> Result<Self, ModelError> {
        for v in t.vertices() {
            if !t.module(v).is_based() {
                return Err(ModelError::NotBased(v.clone()));
            }
        }
        let mut matrices = BTreeMap::new();
        for (p, c) in Self::oriented_edges(t, root) {
            let (mp, mc) = (t.module(&p), t.module(&c));
            let raw = Matrix::from_fn(mc.dim(), mp.dim(), |_, _| Scalar::int(rng.gen_range(1..=9)));
            let mut m = normalize_columns(&raw);
            if equivariant {
                let group = t.symmetry().group();
                let mut acc = Matrix::zeros(m.rows(), m.cols());
                for g in 0..group.order() {
                    let pc = mc.basis_permutation(g).expect("based");
                    let pp = mp.basis_permutation(g).expect("based");
                    let mut moved = Matrix::zeros(m.rows(), m.cols());
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            moved[(pc[i], pp[j])] = m[(i, j)].clone();
                        }
                    }
                    acc = acc.add(&moved);
                }
                let inv = Scalar::frac(1, group.order() as i64);
                m = acc.map(|x| x.mul_ref(&inv));
            }
            matrices.insert((p, c), m);
        }
        let raw: Vec<Scalar> = (0..t.module(root).dim())
            .map(|_| Scalar::int(rng.gen_range(1..=9)))
            .collect();
        let total = raw.iter().fold(Scalar::zero(), |a, x| a.add_ref(x));
        let root_distribution = raw.iter().map(|x| x.try_div(&total).unwrap()).collect();
        Ok(StochasticRepresentation {
            root: root.to_string(),
            matrices,
            root_distribution,
        })
    }
}

fn normalize_columns(m: &Mat) -> Mat {
    let sums: Vec<Scalar> = (0..m.cols())
        .map(|j| m.column(j).iter().fold(Scalar::zero(), |a, x| a.add_ref(x)))
        .collect();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        m[(i, j)].try_div(&sums[j]).unwrap()
    })
}

/// A uniform point with entries `n/d`, used where a rational is needed.
pub fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    let n = rng.gen_range(-height..=height);
    let d = rng.gen_range(1..=height);
    Rational::new(n, d)
}
