//! The tensor map of a tree and its statistical counterpart.

use super::representation::{StochasticRepresentation, TreeRepresentation};
use super::tensor::{kron_vec, LeafTensor};
use super::ModelError;
use num_traits::Zero;

use crate::algebra::{Matrix, Ring, Scale};
use crate::tree::SpacedTree;
use crate::{Mat, Scalar};

/// `Psi_T(A)`, splitting at the smallest internal vertex.
pub fn psi<E: Ring + Scale<Scalar>>(t: &SpacedTree, a: &TreeRepresentation<E>) -> LeafTensor<E> {
    match t.internal().first() {
        None => edge_tensor(t, a),
        Some(q) => contract_at(t, a, q, None),
    }
}

/// `Psi_T(A)`, splitting at the given internal vertex.
pub fn psi_split_at<E: Ring + Scale<Scalar>>(
    t: &SpacedTree,
    a: &TreeRepresentation<E>,
    q: &str,
) -> LeafTensor<E> {
    contract_at(t, a, q, None)
}

fn edge_tensor<E: Ring>(t: &SpacedTree, a: &TreeRepresentation<E>) -> LeafTensor<E> {
    let leaves = t.leaves();
    let m = a.get(&leaves[0], &leaves[1]);
    LeafTensor::new(leaves, vec![m.rows(), m.cols()], m.data().to_vec())
}

/// Contracts the branches at `q` along its distinguished basis:
/// `sum_b w(b) (x)_p (b | Psi_p)`, with weights `w` defaulting to 1.
fn contract_at<E: Ring + Scale<Scalar>>(
    t: &SpacedTree,
    a: &TreeRepresentation<E>,
    q: &str,
    weights: Option<&[E]>,
) -> LeafTensor<E> {
    let mq = t.module(q);
    let basis = mq.basis().expect("internal vertices are based");
    // Column b of `pairing` is form * b, so (b | v) = v . pairing[:, b].
    let pairing = mq.form().mul(basis);
    let nb = basis.cols();
    let mut factors: Vec<String> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();
    let mut contracted: Vec<Matrix<E>> = Vec::new();
    for branch in t.branches_at(q).expect("q is internal") {
        let sub = psi(&branch, a);
        let mut order: Vec<String> = sub.factors().iter().filter(|f| *f != q).cloned().collect();
        order.push(q.to_string());
        let sub = sub.permuted(&order);
        let (rows, cols) = sub.matrix_shape(order.len() - 1);
        let data = sub.data();
        let c = Matrix::from_fn(rows, nb, |x, b| {
            let mut acc = E::zero();
            for j in 0..cols {
                let v = &data[x * cols + j];
                let s = &pairing[(j, b)];
                if !v.is_zero() && !s.is_zero() {
                    acc.add_assign_ref(&v.scale(s));
                }
            }
            acc
        });
        factors.extend(order[..order.len() - 1].iter().cloned());
        dims.extend(sub.dims()[..order.len() - 1].iter().copied());
        contracted.push(c);
    }
    let total: usize = dims.iter().product();
    let mut data = vec![E::zero(); total];
    for b in 0..nb {
        if weights.is_some_and(|w| w[b].is_zero()) {
            continue;
        }
        let mut v = contracted[0].column(b);
        for c in &contracted[1..] {
            v = kron_vec(&v, &c.column(b));
        }
        if let Some(w) = weights {
            v = v.iter().map(|x| x.mul_ref(&w[b])).collect();
        }
        for (acc, x) in data.iter_mut().zip(&v) {
            acc.add_assign_ref(x);
        }
    }
    LeafTensor::new(factors, dims, data).permuted(&t.leaves())
}

/// `Phi_T(A, pi)` in module coordinates of the leaf space.
pub fn phi(t: &SpacedTree, s: &StochasticRepresentation) -> Result<LeafTensor<Scalar>, ModelError> {
    s.validate(t)?;
    let a = s.to_representation(t);
    let r = &s.root;
    if !t.is_leaf(r) {
        return Ok(contract_at(t, &a, r, Some(&s.root_distribution)));
    }
    // At a leaf root the root factor itself is kept: apply
    // v -> sum_b pi(b) b (b | v) to that factor.
    let m = t.module(r);
    let b = m.basis().expect("validated");
    let d = b.cols();
    let diag = Matrix::from_fn(d, d, |i, j| {
        if i == j {
            s.root_distribution[i].clone()
        } else {
            Scalar::zero()
        }
    });
    let map: Mat = b.mul(&diag).mul(&b.transpose()).mul(m.form());
    Ok(psi(t, &a).map_factor(r, &map))
}

/// Coefficients of a leaf tensor in the product of distinguished bases,
/// with the basis labels of each leaf.
pub fn distribution_table(
    t: &SpacedTree,
    v: &LeafTensor<Scalar>,
) -> Result<Vec<(Vec<String>, Scalar)>, ModelError> {
    let mut out = v.clone();
    for leaf in t.leaves() {
        let m = t.module(&leaf);
        let b = m
            .basis()
            .ok_or_else(|| ModelError::NotBased(leaf.clone()))?;
        // Coefficients against an orthonormal basis are (b | v).
        out = out.map_factor(&leaf, &b.transpose().mul(m.form()));
    }
    let dims = out.dims().to_vec();
    let labels: Vec<&[String]> = t
        .leaves()
        .iter()
        .map(|l| t.module(l).basis_labels())
        .collect::<Vec<_>>();
    let rows = out
        .data()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let idx = super::tensor::digits(i, &dims);
            (
                idx.iter()
                    .enumerate()
                    .map(|(k, &j)| labels[k][j].clone())
                    .collect(),
                x.clone(),
            )
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{FiniteGroup, GModule, Symmetry};
    use crate::model::representation::random_representation;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2_star(leaves: usize) -> SpacedTree {
        let sym =
            Symmetry::new(FiniteGroup::from_cycles(&["1", "x"], &["(1 x)"]).unwrap()).unwrap();
        let m = GModule::natural(sym.clone());
        let mut vs = vec![("r".to_string(), m.clone())];
        let mut es = Vec::new();
        for i in 1..=leaves {
            vs.push((i.to_string(), m.clone()));
            es.push(("r".to_string(), i.to_string()));
        }
        SpacedTree::new(sym, vs, &es).unwrap()
    }

    #[test]
    fn valency_two_is_matrix_product() {
        let t = z2_star(2);
        let a = random_representation(&t, 3, false, 5);
        let p = psi(&t, &a);
        let expected = a.get("1", "r").mul(&a.get("r", "2"));
        assert_eq!(p.data(), expected.data());
    }

    #[test]
    fn splitting_vertex_does_not_matter() {
        let sym =
            Symmetry::new(FiniteGroup::from_cycles(&["1", "x"], &["(1 x)"]).unwrap()).unwrap();
        let m = GModule::natural(sym.clone());
        let (w, _) = m.weight_coordinates().unwrap();
        let names = ["1", "2", "3", "4", "a", "b"];
        let vs = names
            .iter()
            .map(|n| (n.to_string(), if *n == "2" { w.clone() } else { m.clone() }))
            .collect();
        let es: Vec<(String, String)> =
            [("a", "1"), ("a", "2"), ("a", "b"), ("b", "3"), ("b", "4")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect();
        let t = SpacedTree::new(sym, vs, &es).unwrap();
        for seed in 0..5 {
            let a = random_representation(&t, seed, false, 4);
            assert_eq!(psi_split_at(&t, &a, "a"), psi_split_at(&t, &a, "b"));
        }
    }

    #[test]
    fn phi_sums_to_one_and_matches_the_bridge() {
        let t = z2_star(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = StochasticRepresentation::random(&t, "r", &mut rng, true).unwrap();
        let f = phi(&t, &s).unwrap();
        let total = f.data().iter().fold(Scalar::zero(), |a, x| a.add_ref(x));
        assert!(total.is_one());
        assert_eq!(f, psi(&t, &s.bridge(&t)));
    }

    #[test]
    fn phi_on_a_single_edge_from_the_root() {
        let t = z2_star(1);
        let mut matrices = std::collections::BTreeMap::new();
        matrices.insert(("r".to_string(), "1".to_string()), Matrix::identity(2));
        let pi = vec![Scalar::frac(1, 3), Scalar::frac(2, 3)];
        let s = StochasticRepresentation {
            root: "r".into(),
            matrices,
            root_distribution: pi.clone(),
        };
        let table = distribution_table(&t, &phi(&t, &s).unwrap()).unwrap();
        let value = |a: &str, b: &str| {
            table
                .iter()
                .find(|(l, _)| l[0] == a && l[1] == b)
                .unwrap()
                .1
                .clone()
        };
        assert_eq!(value("1", "1"), pi[0]);
        assert_eq!(value("x", "x"), pi[1]);
        assert!(value("1", "x").is_zero());
    }
}
