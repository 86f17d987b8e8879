//! Group actions, equivariant base changes and valency-2 refinement.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::representation::{random_scalar, TreeRepresentation};
use super::tensor::LeafTensor;
use super::ModelError;
use crate::algebra::{Matrix, Ring};
use crate::grouprep::GModule;
use crate::tree::{SpacedTree, TreeError};
use crate::{Mat, Scalar};

/// `g A`: every edge tensor moved by `M_a(g) A M_b(g)^T`.
pub fn act_on_representation(
    t: &SpacedTree,
    g: usize,
    a: &TreeRepresentation<Scalar>,
) -> TreeRepresentation<Scalar> {
    let mut out = TreeRepresentation::new();
    for ((x, y), m) in a.edges() {
        let mx = t.module(x).action(g).to_dense();
        let my = t.module(y).action(g).to_dense();
        out.insert(x, y, mx.mul(m).mul(&my.transpose()));
    }
    out
}

/// `g` acting diagonally on a leaf tensor.
pub fn act_on_leaves(t: &SpacedTree, g: usize, v: &LeafTensor<Scalar>) -> LeafTensor<Scalar> {
    let mut out = v.clone();
    for leaf in t.leaves() {
        out = out.map_factor(&leaf, &t.module(&leaf).action(g).to_dense());
    }
    out
}

/// `(1/|G|) sum_g g v`.
pub fn reynolds_on_leaves(t: &SpacedTree, v: &LeafTensor<Scalar>) -> LeafTensor<Scalar> {
    let order = t.symmetry().order();
    let mut acc = LeafTensor::zeros(v.factors().to_vec(), v.dims().to_vec());
    for g in 0..order {
        acc = acc.add(&act_on_leaves(t, g, v));
    }
    let inv = Scalar::frac(1, order as i64);
    acc.map(|x| x.mul_ref(&inv))
}

/// A random invertible map on `m` commuting with the group action.
pub fn random_equivariant_invertible(m: &GModule, rng: &mut ChaCha8Rng, height: i64) -> Mat {
    let group = m.group();
    loop {
        let raw = Matrix::from_fn(m.dim(), m.dim(), |_, _| random_scalar(rng, height));
        let mut acc = Matrix::zeros(m.dim(), m.dim());
        for g in 0..group.order() {
            let left = m.action(g).to_dense();
            let right = m.action(group.inv(g)).to_dense();
            acc = acc.add(&left.mul(&raw).mul(&right));
        }
        if !acc.determinant().is_zero() {
            return acc;
        }
    }
}

fn check_equivariant(m: &GModule, h: &Mat) -> bool {
    (0..m.group().order()).all(|g| {
        let a = m.action(g).to_dense();
        a.mul(h) == h.mul(&a)
    })
}

/// The module with the same action, transported along `h`: the form
/// becomes `H^-T G H^-1` and the distinguished basis `H B`.
pub fn transport_module(m: &GModule, h: &Mat) -> Result<GModule, ModelError> {
    let inv = h
        .inverse()
        .map_err(|_| ModelError::Invalid("base change is not invertible".into()))?;
    if !check_equivariant(m, h) {
        return Err(ModelError::Invalid(
            "base change does not commute with the group".into(),
        ));
    }
    let gens: Vec<Mat> = m
        .group()
        .generators()
        .iter()
        .map(|&g| m.action(g).to_dense())
        .collect();
    let form = inv.transpose().mul(m.form()).mul(&inv);
    let basis = m.basis().map(|b| (h.mul(b), m.basis_labels().to_vec()));
    GModule::from_matrices(
        m.symmetry().clone(),
        m.labels().to_vec(),
        &gens,
        form,
        basis,
    )
    .map_err(|e| ModelError::Invalid(e.to_string()))
}

/// `hT` together with `h^-1 A`, for a representation `A` of `hT`.
pub fn act_base_change(
    t: &SpacedTree,
    h: &BTreeMap<String, Mat>,
    a: &TreeRepresentation<Scalar>,
) -> Result<(SpacedTree, TreeRepresentation<Scalar>), ModelError> {
    let moved = t.map_modules(|v, m| {
        transport_module(m, &h[v]).map_err(|e| {
            TreeError::Module(
                v.to_string(),
                crate::grouprep::GroupError::Module(e.to_string()),
            )
        })
    })?;
    let inv: BTreeMap<&String, Mat> = h
        .iter()
        .map(|(k, m)| {
            Ok((
                k,
                m.inverse()
                    .map_err(|_| ModelError::Invalid(format!("h at '{k}' is singular")))?,
            ))
        })
        .collect::<Result<_, ModelError>>()?;
    let mut pulled = TreeRepresentation::new();
    for ((x, y), m) in a.edges() {
        pulled.insert(x, y, inv[x].mul(m).mul(&inv[y].transpose()));
    }
    Ok((moved, pulled))
}

/// Applies `h` on every leaf factor.
pub fn apply_on_leaves(
    t: &SpacedTree,
    h: &BTreeMap<String, Mat>,
    v: &LeafTensor<Scalar>,
) -> LeafTensor<Scalar> {
    let mut out = v.clone();
    for leaf in t.leaves() {
        out = out.map_factor(&leaf, &h[&leaf]);
    }
    out
}

/// Checks `Psi_{hT}(A) = h Psi_T(h^-1 A)`.
pub fn check_base_change(
    t: &SpacedTree,
    h: &BTreeMap<String, Mat>,
    a: &TreeRepresentation<Scalar>,
) -> Result<bool, ModelError> {
    let (moved, pulled) = act_base_change(t, h, a)?;
    let lhs = super::psi(&moved, a);
    let rhs = apply_on_leaves(t, h, &super::psi(t, &pulled));
    Ok(lhs == rhs)
}

/// Coefficients of an edge tensor against the distinguished bases.
fn distinguished(t: &SpacedTree, p: &str, r: &str, a: &Mat) -> Mat {
    let (mp, mr) = (t.module(p), t.module(r));
    let (bp, br) = (mp.basis().expect("based"), mr.basis().expect("based"));
    bp.transpose().mul(mp.form()).mul(a).mul(mr.form()).mul(br)
}

fn from_distinguished(t: &SpacedTree, p: &str, r: &str, a: &Mat) -> Mat {
    let (bp, br) = (
        t.module(p).basis().expect("based"),
        t.module(r).basis().expect("based"),
    );
    bp.mul(a).mul(&br.transpose())
}

/// Refines the edge `p - r` to a path `p - q1 - q2 - r` and factors the
/// tensor of `p - r` into three equivariant tensors whose composite is the
/// original one, so that `Psi` is unchanged.
///
/// Writing `M` for the edge tensor in distinguished bases, the factors are
/// `M (M^T M)^-1, M^T, M` or, failing that, `M, M^T, (M M^T)^-1 M`.
/// Returns `None` when both Gram matrices are singular.
#[allow(clippy::type_complexity)]
pub fn factor_through_valency2(
    t: &SpacedTree,
    a: &TreeRepresentation<Scalar>,
    p: &str,
    r: &str,
) -> Result<Option<(SpacedTree, TreeRepresentation<Scalar>, String, String)>, ModelError> {
    let (refined, q1, q2) = t.insert_valency2(p, r)?;
    let m = distinguished(t, p, r, &a.get(p, r));
    let mt = m.transpose();
    let factors = if let Ok(inv) = mt.mul(&m).inverse() {
        (m.mul(&inv), mt.clone(), m.clone())
    } else if let Ok(inv) = m.mul(&mt).inverse() {
        (m.clone(), mt.clone(), inv.mul(&m))
    } else {
        return Ok(None);
    };
    let mut out = TreeRepresentation::new();
    for ((x, y), e) in a.edges() {
        if !((x == p && y == r) || (x == r && y == p)) {
            out.insert(x, y, e.clone());
        }
    }
    out.insert(p, &q1, from_distinguished(&refined, p, &q1, &factors.0));
    out.insert(&q1, &q2, from_distinguished(&refined, &q1, &q2, &factors.1));
    out.insert(&q2, r, from_distinguished(&refined, &q2, r, &factors.2));
    Ok(Some((refined, out, q1, q2)))
}

/// Orbit representatives of the distinguished basis at the centre of a star.
pub fn centre_orbits(star: &SpacedTree) -> Result<Vec<usize>, ModelError> {
    let centre = star
        .centre()
        .ok_or_else(|| ModelError::Invalid("not a star".into()))?;
    let m = star.module(&centre);
    let n = m
        .basis()
        .ok_or_else(|| ModelError::NotBased(centre.clone()))?
        .cols();
    let perms: Vec<Vec<usize>> = (0..m.group().order())
        .map(|g| m.basis_permutation(g).expect("based"))
        .collect();
    let mut seen = vec![false; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if !seen[i] {
            reps.push(i);
            for p in &perms {
                seen[p[i]] = true;
            }
        }
    }
    Ok(reps)
}

/// `rho(v_1 (x) ... (x) v_n)` with each `v_p` random in `V_p^{G_i}`,
/// where `G_i` stabilises the `orbit`-th representative of the centre basis.
pub fn pure_cone_sample(
    star: &SpacedTree,
    orbit: usize,
    seed: u64,
) -> Result<LeafTensor<Scalar>, ModelError> {
    let reps = centre_orbits(star)?;
    let &rep = reps.get(orbit).ok_or_else(|| {
        ModelError::Invalid(format!(
            "orbit index {orbit} out of range ({} orbits)",
            reps.len()
        ))
    })?;
    let centre = star.centre().expect("checked");
    let m = star.module(&centre);
    let stab: Vec<usize> = (0..m.group().order())
        .filter(|&g| m.basis_permutation(g).expect("based")[rep] == rep)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pure: Option<LeafTensor<Scalar>> = None;
    for leaf in star.leaves() {
        let basis = star.module(&leaf).invariant_basis(&stab);
        let d = star.module(&leaf).dim();
        let mut v = vec![Scalar::zero(); d];
        for b in &basis {
            let c = random_scalar(&mut rng, 9);
            for (x, y) in v.iter_mut().zip(b) {
                x.add_assign_ref(&y.mul_ref(&c));
            }
        }
        let factor = LeafTensor::new(vec![leaf.clone()], vec![d], v);
        pure = Some(match pure {
            None => factor,
            Some(acc) => {
                let mut names = acc.factors().to_vec();
                names.push(leaf.clone());
                let mut dims = acc.dims().to_vec();
                dims.push(d);
                LeafTensor::new(
                    names,
                    dims,
                    super::tensor::kron_vec(acc.data(), factor.data()),
                )
            }
        });
    }
    Ok(reynolds_on_leaves(star, &pure.expect("a star has leaves")))
}
