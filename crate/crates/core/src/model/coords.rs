//! Coordinates on the invariant subspace of a tensor product of modules.

use std::collections::HashSet;

use num_traits::Zero;

use crate::algebra::span::SparseSpan;
use crate::algebra::{Label, Ring, Scale};
use crate::grouprep::GModule;
use crate::model::tensor::digits;
use crate::Scalar;

/// A reduced echelon basis of `(M_1 (x) ... (x) M_n)^G`.
///
/// Each basis vector has a 1 at its pivot and 0 at every other pivot, so
/// the coordinate of an invariant vector along basis vector `k` is simply
/// its entry at pivot `k`. Coordinates are labelled
/// `role[l_1,...,l_n]` after the module labels at the pivot.
#[derive(Clone, Debug)]
pub struct InvariantCoordinates {
    dims: Vec<usize>,
    pivots: Vec<usize>,
    basis: Vec<Vec<(usize, Scalar)>>,
    labels: Vec<Label>,
}

/// `g` applied to the unit vector at `index` of a tensor product, sparsely.
fn act_on_unit(modules: &[&GModule], g: usize, index: &[usize]) -> Vec<(usize, Scalar)> {
    let mut acc: Vec<(usize, Scalar)> = vec![(0, Scalar::one())];
    for (m, &i) in modules.iter().zip(index) {
        let col = m.action(g).column(i);
        let d = m.dim();
        let mut next = Vec::with_capacity(acc.len() * col.len());
        for (a, x) in &acc {
            for (b, y) in col {
                next.push((a * d + b, x.mul_ref(y)));
            }
        }
        acc = next;
    }
    acc
}

impl InvariantCoordinates {
    pub fn new(role: &str, modules: &[&GModule]) -> Self {
        let dims: Vec<usize> = modules.iter().map(|m| m.dim()).collect();
        let total: usize = dims.iter().product();
        let group = modules[0].group();
        let order = group.order();
        let permutational = modules
            .iter()
            .all(|m| (0..order).all(|g| m.action(g).as_permutation().is_some()));
        let inv = Scalar::frac(1, order as i64);
        let mut span = SparseSpan::new();
        let mut seen = HashSet::new();
        for i in 0..total {
            if permutational && seen.contains(&i) {
                continue;
            }
            let index = digits(i, &dims);
            let mut image: std::collections::BTreeMap<usize, Scalar> = Default::default();
            for g in 0..order {
                for (k, x) in act_on_unit(modules, g, &index) {
                    image
                        .entry(k)
                        .or_insert_with(Scalar::zero)
                        .add_assign_ref(&x);
                }
            }
            let v: Vec<(usize, Scalar)> = image
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, x.mul_ref(&inv)))
                .collect();
            if permutational {
                seen.extend(v.iter().map(|(k, _)| *k));
            }
            span.insert(&v);
        }
        let mut pairs: Vec<(usize, Vec<(usize, Scalar)>)> =
            span.pivots().into_iter().zip(span.basis()).collect();
        pairs.sort_by_key(|(p, _)| *p);
        let labels = pairs
            .iter()
            .map(|(p, _)| {
                let idx = digits(*p, &dims);
                Label::new(
                    role,
                    modules
                        .iter()
                        .zip(&idx)
                        .map(|(m, &j)| m.labels()[j].clone())
                        .collect(),
                )
            })
            .collect();
        let (pivots, basis) = pairs.into_iter().unzip();
        InvariantCoordinates {
            dims,
            pivots,
            basis,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<(usize, Scalar)>] {
        &self.basis
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Coordinates of an invariant vector.
    pub fn coords<E: Clone>(&self, v: &[E]) -> Vec<E> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    /// The invariant vector with the given coordinates.
    pub fn vector<E: Ring + Scale<Scalar>>(&self, z: &[E]) -> Vec<E> {
        let total: usize = self.dims.iter().product();
        let mut out = vec![E::zero(); total];
        for (b, c) in self.basis.iter().zip(z) {
            if c.is_zero() {
                continue;
            }
            for (k, x) in b {
                out[*k].add_assign_ref(&c.scale(x));
            }
        }
        out
    }

    /// Whether `v` lies in the invariant subspace.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let rebuilt = self.vector(&self.coords(v));
        rebuilt.as_slice() == v
    }
}
