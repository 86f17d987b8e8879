//! Irreducible representations of small groups.
//!
//! Linear characters are found by searching homomorphisms into the roots of
//! unity of order dividing the exponent. Higher-dimensional irreducibles are
//! cut out of permutation, tensor and regular modules by projecting away
//! the isotypic parts already known.

use std::collections::VecDeque;

use num_traits::Zero;

use super::{FiniteGroup, GroupError};
use crate::algebra::{Field, Matrix, Ring, Scalar};
use crate::Mat;

/// An irreducible representation with its matrices for every element.
#[derive(Clone, Debug, PartialEq)]
pub struct Irrep {
    pub name: String,
    matrices: Vec<Mat>,
    character: Vec<Scalar>,
}

impl Irrep {
    /// Builds the representation from one matrix per group generator,
    /// checking the homomorphism property on every pair of elements.
    pub fn from_generator_matrices(
        group: &FiniteGroup,
        name: &str,
        gens: &[Mat],
    ) -> Result<Self, GroupError> {
        if gens.len() != group.generators().len() {
            return Err(GroupError::Irrep(format!(
                "{name}: expected {} generator matrices",
                group.generators().len()
            )));
        }
        let d = gens.first().map_or(1, |m| m.rows());
        if gens.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(GroupError::Irrep(format!(
                "{name}: generator matrices must be square of equal size"
            )));
        }
        let mut mats: Vec<Option<Mat>> = vec![None; group.order()];
        mats[0] = Some(Matrix::identity(d));
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (k, &g) in group.generators().iter().enumerate() {
                let b = group.mul(a, g);
                let m = mats[a].as_ref().unwrap().mul(&gens[k]);
                match &mats[b] {
                    None => {
                        mats[b] = Some(m);
                        queue.push_back(b);
                    }
                    Some(old) if *old != m => {
                        return Err(GroupError::Irrep(format!(
                            "{name}: matrices violate the group relations"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let matrices: Vec<Mat> = mats
            .into_iter()
            .map(|m| m.expect("generators reach every element"))
            .collect();
        Ok(Self::from_matrices(name, matrices))
    }

    fn from_matrices(name: &str, matrices: Vec<Mat>) -> Self {
        let character = matrices.iter().map(trace).collect();
        Irrep {
            name: name.to_string(),
            matrices,
            character,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrix(&self, g: usize) -> &Mat {
        &self.matrices[g]
    }

    pub fn character(&self) -> &[Scalar] {
        &self.character
    }
}

fn trace(m: &Mat) -> Scalar {
    let mut t = Scalar::zero();
    for i in 0..m.rows() {
        t.add_assign_ref(&m[(i, i)]);
    }
    t
}

/// `(1/|G|) sum_g a(g) b(g^-1)`.
pub fn inner_product(group: &FiniteGroup, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for g in 0..group.order() {
        acc.add_assign_ref(&a[g].mul_ref(&b[group.inv(g)]));
    }
    acc.mul_ref(&Scalar::frac(1, group.order() as i64))
}

/// Which built-in table covers a group, if any.
pub fn builtin_kind(group: &FiniteGroup) -> Option<&'static str> {
    let stats = group.order_statistics();
    let count = |o: u32| stats.get(&o).copied().unwrap_or(0);
    if group.is_abelian() {
        return (group.exponent() <= 12).then_some("abelian");
    }
    match group.order() {
        6 => Some("S3"),
        8 if count(2) == 5 => Some("D8"),
        24 if count(2) == 9 && count(3) == 8 && count(4) == 6 => Some("S4"),
        _ => None,
    }
}

/// The complete list of irreducible representations of a supported group:
/// the trivial character first, then the other linear characters, then the
/// higher-dimensional ones in order of discovery.
pub fn irreducible_representations(group: &FiniteGroup) -> Result<Vec<Irrep>, GroupError> {
    let Some(kind) = builtin_kind(group) else {
        return Err(GroupError::Unsupported(format!(
            "no built-in irreducible representations for this group of order {}; supply them in the input",
            group.order()
        )));
    };
    let mut irreps = linear_characters(group);
    if kind != "abelian" {
        extend_with_higher(group, &mut irreps)?;
    }
    check_table(group, &irreps)?;
    Ok(irreps)
}

/// Validates a user-supplied table: orthonormal characters whose squared
/// dimensions sum to the group order.
pub fn check_table(group: &FiniteGroup, irreps: &[Irrep]) -> Result<(), GroupError> {
    for (i, a) in irreps.iter().enumerate() {
        for (j, b) in irreps.iter().enumerate() {
            let ip = inner_product(group, a.character(), b.character());
            let expected = if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            if ip != expected {
                return Err(GroupError::Irrep(format!(
                    "characters {} and {} are not orthonormal",
                    a.name, b.name
                )));
            }
        }
    }
    let total: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
    if total != group.order() {
        return Err(GroupError::Irrep(format!(
            "squared dimensions sum to {total}, not {}",
            group.order()
        )));
    }
    Ok(())
}

fn linear_characters(group: &FiniteGroup) -> Vec<Irrep> {
    let n = group.exponent();
    let gens = group.generators();
    let mut out = Vec::new();
    let mut assignment = vec![0u32; gens.len()];
    loop {
        if let Some(values) = extend_linear(group, &assignment, n) {
            let name = format!("chi{}", out.len());
            let mats = values
                .iter()
                .map(|&k| Matrix::from_fn(1, 1, |_, _| Scalar::zeta_pow(n, k as i64)))
                .collect();
            out.push(Irrep::from_matrices(&name, mats));
        }
        // Next assignment in lexicographic order.
        let Some(pos) = (0..assignment.len()).rev().find(|&i| assignment[i] + 1 < n) else {
            break;
        };
        assignment[pos] += 1;
        for a in &mut assignment[pos + 1..] {
            *a = 0;
        }
    }
    out
}

/// Exponents `k` with `chi(g) = zeta_n^k`, if the generator assignment
/// extends to a homomorphism.
fn extend_linear(group: &FiniteGroup, assignment: &[u32], n: u32) -> Option<Vec<u32>> {
    let mut value: Vec<Option<u32>> = vec![None; group.order()];
    value[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        let va = value[a].unwrap();
        for (k, &g) in group.generators().iter().enumerate() {
            let b = group.mul(a, g);
            let vb = (va + assignment[k]) % n;
            match value[b] {
                None => {
                    value[b] = Some(vb);
                    queue.push_back(b);
                }
                Some(x) if x != vb => return None,
                Some(_) => {}
            }
        }
    }
    value.into_iter().collect()
}

/// A representation given by matrices for all elements.
struct Candidate {
    mats: Vec<Mat>,
}

impl Candidate {
    fn dim(&self) -> usize {
        self.mats[0].rows()
    }
}

fn extend_with_higher(group: &FiniteGroup, irreps: &mut Vec<Irrep>) -> Result<(), GroupError> {
    let complete =
        |irreps: &[Irrep]| irreps.iter().map(|r| r.dim() * r.dim()).sum::<usize>() == group.order();
    let permutation = Candidate {
        mats: group
            .elements()
            .iter()
            .map(|p| permutation_matrix(p))
            .collect(),
    };
    try_candidate(group, irreps, &permutation)?;
    let mut round = 0;
    while !complete(irreps) && round < 3 {
        round += 1;
        let known = irreps.len();
        for i in 0..known {
            for j in i..known {
                if complete(irreps) {
                    break;
                }
                let cand = Candidate {
                    mats: (0..group.order())
                        .map(|g| irreps[i].matrix(g).kron(irreps[j].matrix(g)))
                        .collect(),
                };
                try_candidate(group, irreps, &cand)?;
            }
        }
    }
    if !complete(irreps) {
        let order = group.order();
        let regular = Candidate {
            mats: (0..order)
                .map(|g| {
                    let image: Vec<u32> = (0..order).map(|h| group.mul(g, h) as u32).collect();
                    permutation_matrix(&image)
                })
                .collect(),
        };
        while !complete(irreps) {
            if !try_candidate(group, irreps, &regular)? {
                return Err(GroupError::Unsupported(
                    "could not split the regular representation".into(),
                ));
            }
        }
    }
    Ok(())
}

fn permutation_matrix(p: &[u32]) -> Mat {
    let n = p.len();
    let mut m = Matrix::zeros(n, n);
    for (j, &i) in p.iter().enumerate() {
        m[(i as usize, j)] = Scalar::one();
    }
    m
}

/// Looks for one new irreducible constituent of `cand`; returns whether
/// one was added.
fn try_candidate(
    group: &FiniteGroup,
    irreps: &mut Vec<Irrep>,
    cand: &Candidate,
) -> Result<bool, GroupError> {
    let n = cand.dim();
    let order = Scalar::int(group.order() as i64);
    let mut residual = Matrix::identity(n);
    for r in irreps.iter() {
        let mut e = Matrix::zeros(n, n);
        for g in 0..group.order() {
            let c = r.character()[group.inv(g)].mul_ref(&Scalar::int(r.dim() as i64));
            if !c.is_zero() {
                e = e.add(&cand.mats[g].map(|x| x.mul_ref(&c)));
            }
        }
        let e = e.map(|x| x.try_div(&order).expect("nonzero order"));
        residual = residual.sub(&residual.mul(&e));
    }
    let columns: Vec<Vec<Scalar>> = (0..n)
        .map(|j| residual.column(j))
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    if columns.is_empty() {
        return Ok(false);
    }
    // Seeds: residual columns, then their averages over cyclic subgroups.
    let mut seeds: Vec<Vec<Scalar>> = columns.clone();
    for g in 1..group.order() {
        let sub = group.subgroup(&[g]);
        for c in &columns {
            let mut v = vec![Scalar::zero(); n];
            for &h in &sub {
                for (a, b) in v.iter_mut().zip(cand.mats[h].mul_vec(c)) {
                    a.add_assign_ref(&b);
                }
            }
            if v.iter().any(|x| !x.is_zero()) {
                seeds.push(v);
            }
        }
    }
    for seed in seeds {
        let basis = spin(&cand.mats, &seed);
        let mats = restrict(&cand.mats, &basis)?;
        let character: Vec<Scalar> = mats.iter().map(trace).collect();
        if inner_product(group, &character, &character) == Scalar::one() {
            let name = format!("chi{}", irreps.len());
            irreps.push(Irrep::from_matrices(&name, mats));
            return Ok(true);
        }
    }
    Ok(false)
}

/// Basis of the cyclic submodule generated by `v`.
fn spin(mats: &[Mat], v: &[Scalar]) -> Vec<Vec<Scalar>> {
    let mut span = crate::algebra::span::VectorSpan::new(v.len());
    let mut basis = Vec::new();
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if !span.insert(&w) {
            continue;
        }
        for m in mats {
            queue.push_back(m.mul_vec(&w));
        }
        basis.push(w);
    }
    basis
}

/// Matrices of the action on the span of `basis`, which must be invariant.
pub(crate) fn restrict(mats: &[Mat], basis: &[Vec<Scalar>]) -> Result<Vec<Mat>, GroupError> {
    let n = basis.first().map_or(0, |b| b.len());
    let b = Matrix::from_columns(basis, n);
    let rows = b.transpose().rref().pivots;
    let square = b.submatrix(&rows, &(0..basis.len()).collect::<Vec<_>>());
    let inv = square
        .inverse()
        .map_err(|_| GroupError::Irrep("dependent basis".into()))?;
    let all_cols: Vec<usize> = (0..basis.len()).collect();
    mats.iter()
        .map(|m| {
            let image = m.mul(&b);
            let x = inv.mul(&image.submatrix(&rows, &all_cols));
            if b.mul(&x) != image {
                return Err(GroupError::Irrep("span is not invariant".into()));
            }
            Ok(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(g: &FiniteGroup) -> Vec<usize> {
        irreducible_representations(g)
            .unwrap()
            .iter()
            .map(|r| r.dim())
            .collect()
    }

    #[test]
    fn cyclic_groups() {
        assert_eq!(dims(&FiniteGroup::cyclic(2)), vec![1, 1]);
        let c5 = irreducible_representations(&FiniteGroup::cyclic(5)).unwrap();
        assert_eq!(c5.len(), 5);
        assert_eq!(c5[1].character()[1], Scalar::root_of_unity(5));
        assert_eq!(dims(&FiniteGroup::trivial()), vec![1]);
    }

    #[test]
    fn symmetric_and_dihedral_groups() {
        let s3 = FiniteGroup::from_cycles(&["1", "2", "3"], &["(1 2)", "(2 3)"]).unwrap();
        assert_eq!(dims(&s3), vec![1, 1, 2]);
        let d8 = FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A C G T)", "(A G)"]).unwrap();
        assert_eq!(dims(&d8), vec![1, 1, 1, 1, 2]);
        let s4 = FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A C G T)", "(A C)"]).unwrap();
        let mut d = dims(&s4);
        d.sort();
        assert_eq!(d, vec![1, 1, 2, 3, 3]);
    }

    #[test]
    fn regular_action_of_s3() {
        let g = FiniteGroup::from_cycles(
            &["a", "b", "c", "d", "e", "f"],
            &["(a b)(c d)(e f)", "(a c e)(b f d)"],
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(dims(&g), vec![1, 1, 2]);
    }

    #[test]
    fn unsupported_groups_are_named() {
        let a4 = FiniteGroup::from_cycles(&["1", "2", "3", "4"], &["(1 2 3)", "(2 3 4)"]).unwrap();
        assert_eq!(a4.order(), 12);
        assert!(matches!(
            irreducible_representations(&a4),
            Err(GroupError::Unsupported(_))
        ));
    }
}
