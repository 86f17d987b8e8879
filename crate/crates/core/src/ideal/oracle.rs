//! Degree-bounded vanishing ideals from exact evaluation at sample points.
//!
//! Monomials are split into classes by a multigrading under which the
//! ideal is homogeneous; relations are the exact kernel of the evaluation
//! matrix of each class. For tree models the grading counts, per leaf, the
//! isotypic type of each coordinate in an isotypic-adapted leaf basis: the
//! model is stable under rescaling every isotypic component of every leaf.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linear::{linear_forms, substitute_all, transport_columns};
use super::{tree_coordinates, var_table, GeneratorSet, IdealError, Provenance};
use crate::algebra::modular::kernel;
use crate::algebra::polynomial::canonicalize;
use crate::algebra::{Monomial, Ring};
use crate::grouprep::IsotypicBasis;
use crate::model::representation::random_representation_with;
use crate::model::{psi, InvariantCoordinates};
use crate::tree::SpacedTree;
use crate::{Poly, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest total degree searched.
    pub degree: u32,
    pub seed: u64,
    /// How many times the sample count may double before giving up.
    pub max_rounds: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            degree: 2,
            seed: 0,
            max_rounds: 6,
        }
    }
}

/// Monomials of degree `1..=d` in `n` variables, grouped by
/// (degree, summed grade).
fn monomial_classes(grades: &[Vec<u32>], d: u32) -> BTreeMap<(u32, Vec<u32>), Vec<Monomial>> {
    let n = grades.len();
    let width = grades.first().map_or(0, |g| g.len());
    let mut classes: BTreeMap<(u32, Vec<u32>), Vec<Monomial>> = BTreeMap::new();
    // Nondecreasing variable sequences of each length.
    fn walk(
        start: usize,
        left: u32,
        n: usize,
        seq: &mut Vec<u32>,
        grade: &mut Vec<u32>,
        grades: &[Vec<u32>],
        out: &mut BTreeMap<(u32, Vec<u32>), Vec<Monomial>>,
    ) {
        if !seq.is_empty() {
            let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
            for &v in seq.iter() {
                *counts.entry(v).or_default() += 1;
            }
            out.entry((seq.len() as u32, grade.clone()))
                .or_default()
                .push(Monomial::from_factors(counts));
        }
        if left == 0 {
            return;
        }
        for v in start..n {
            seq.push(v as u32);
            for (g, x) in grade.iter_mut().zip(&grades[v]) {
                *g += x;
            }
            walk(v, left - 1, n, seq, grade, grades, out);
            for (g, x) in grade.iter_mut().zip(&grades[v]) {
                *g -= x;
            }
            seq.pop();
        }
    }
    walk(
        0,
        d,
        n,
        &mut Vec::new(),
        &mut vec![0; width],
        grades,
        &mut classes,
    );
    classes
}

fn evaluate(m: &Monomial, point: &[Scalar]) -> Scalar {
    let mut acc = Scalar::one();
    for &(v, e) in m.factors() {
        acc = acc.mul_ref(&point[v as usize].pow(e));
    }
    acc
}

/// A basis of the polynomials of degree `1..=d` vanishing at every point
/// produced by `sample`, assuming the vanishing ideal is homogeneous for
/// the grading `grades` (one grade vector per variable).
///
/// Each class of monomials is evaluated at `ceil(1.25 * largest class)`
/// points; the count doubles until every class rank agrees across two
/// consecutive batches.
pub fn sampled_relations(
    grades: &[Vec<u32>],
    d: u32,
    max_rounds: usize,
    sample: &mut dyn FnMut() -> Vec<Scalar>,
) -> Result<Vec<Poly>, IdealError> {
    let classes = monomial_classes(grades, d);
    let largest = classes.values().map(|c| c.len()).max().unwrap_or(0);
    let mut batch = (largest * 5).div_ceil(4).max(2);
    let mut points: Vec<Vec<Scalar>> = (0..batch).map(|_| sample()).collect();
    let kernels = |points: &[Vec<Scalar>]| -> Result<Vec<Vec<Vec<Scalar>>>, IdealError> {
        classes
            .values()
            .map(|monos| {
                let rows: Vec<Vec<Scalar>> = points
                    .iter()
                    .map(|p| monos.iter().map(|m| evaluate(m, p)).collect())
                    .collect();
                Ok(kernel(&rows, monos.len())?)
            })
            .collect()
    };
    let mut previous = kernels(&points)?;
    for _ in 0..max_rounds {
        points.extend((0..batch).map(|_| sample()));
        batch *= 2;
        let current = kernels(&points)?;
        let stable = previous
            .iter()
            .zip(&current)
            .all(|(a, b)| a.len() == b.len());
        previous = current;
        if stable {
            let mut out = Vec::new();
            for (monos, ker) in classes.values().zip(&previous) {
                for v in ker {
                    out.push(Poly::from_terms(
                        monos.iter().cloned().zip(v.iter().cloned()),
                    ));
                }
            }
            return Ok(canonicalize(out));
        }
    }
    Err(IdealError::Oracle(format!(
        "evaluation ranks did not stabilise after {} points",
        points.len()
    )))
}

/// Grades of the invariant coordinates of a tree in an isotypic-adapted
/// leaf basis, and the linear map expressing those coordinates through
/// the tree's own coordinates.
struct AdaptedCoordinates {
    coords: InvariantCoordinates,
    grades: Vec<Vec<u32>>,
    /// `w_i` as linear forms in `z`.
    in_z: Vec<Poly>,
    adapted_inv: Vec<crate::Mat>,
}

fn adapted_coordinates(t: &SpacedTree) -> Result<AdaptedCoordinates, IdealError> {
    let z = tree_coordinates(t);
    let leaves = t.leaves();
    let nirr = t.symmetry().irreps().len();
    let mut modules = Vec::new();
    let mut types = Vec::new();
    let mut adapted_inv = Vec::new();
    for leaf in &leaves {
        let m = t.module(leaf);
        let iso = IsotypicBasis::new(m)?;
        let labels = (0..m.dim()).map(|j| format!("a{j}")).collect();
        modules.push(m.change_coordinates(iso.adapted(), labels)?);
        types.push(iso.types());
        adapted_inv.push(iso.adapted_inv().clone());
    }
    let refs: Vec<&crate::grouprep::GModule> = modules.iter().collect();
    let coords = InvariantCoordinates::new("w", &refs);
    let dims = coords.dims().to_vec();
    let grades = coords
        .pivots()
        .iter()
        .map(|&p| {
            let idx = crate::model::tensor::digits(p, &dims);
            let mut g = vec![0u32; leaves.len() * nirr];
            for (k, &j) in idx.iter().enumerate() {
                g[k * nirr + types[k][j]] += 1;
            }
            g
        })
        .collect();
    let maps: Vec<&crate::Mat> = adapted_inv.iter().collect();
    let columns = transport_columns(&z, &coords, |v| {
        super::linear::map_factors(&leaves, &t.leaf_dims(), v, &maps)
    });
    let in_z = linear_forms(&columns, coords.dim(), 0);
    Ok(AdaptedCoordinates {
        coords,
        grades,
        in_z,
        adapted_inv,
    })
}

/// The degree-`<= d` part of the ideal of the model of `t`, from exact
/// evaluation at random equivariant representations. Sound; complete only
/// up to the degree bound, which the result records.
pub fn degree_bounded_vanishing_ideal(
    t: &SpacedTree,
    config: &OracleConfig,
) -> Result<GeneratorSet, IdealError> {
    if config.degree == 0 {
        return Err(IdealError::Oracle(
            "the degree bound must be at least 1".into(),
        ));
    }
    let z = tree_coordinates(t);
    let mut out = GeneratorSet::new(var_table(&z));
    out.complete = false;
    if t.vertex_count() == 2 {
        return Ok(out);
    }
    let adapted = adapted_coordinates(t)?;
    let leaves = t.leaves();
    let dims = t.leaf_dims();
    let maps: Vec<&crate::Mat> = adapted.adapted_inv.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6f72_6163_6c65);
    let mut sample = || {
        let a = random_representation_with(t, &mut rng, true, 9);
        let v = psi(t, &a).into_data();
        adapted
            .coords
            .coords(&super::linear::map_factors(&leaves, &dims, v, &maps))
    };
    let relations = sampled_relations(
        &adapted.grades,
        config.degree,
        config.max_rounds,
        &mut sample,
    )?;
    let polys = substitute_all(&relations, &adapted.in_z);
    out.extend(canonicalize(polys), Provenance::Oracle);
    out.canonicalize();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::span::LinearSpan;

    #[test]
    fn class_sizes() {
        let grades = vec![vec![1, 0], vec![0, 1], vec![1, 0]];
        let classes = monomial_classes(&grades, 2);
        let total: usize = classes.values().map(|c| c.len()).sum();
        assert_eq!(total, 3 + 6);
        assert_eq!(classes[&(2, vec![2, 0])].len(), 3);
    }

    #[test]
    fn rank_one_matrices() {
        // Points (a c, a d, b c, b d): the only quadric is x0 x3 - x1 x2.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut sample = || {
            let v: Vec<Scalar> = (0..4)
                .map(|_| crate::model::representation::random_scalar(&mut rng, 20))
                .collect();
            vec![
                v[0].mul_ref(&v[2]),
                v[0].mul_ref(&v[3]),
                v[1].mul_ref(&v[2]),
                v[1].mul_ref(&v[3]),
            ]
        };
        let grades = vec![vec![0]; 4];
        let rel = sampled_relations(&grades, 2, 6, &mut sample).unwrap();
        assert_eq!(rel.len(), 1);
        let det = Poly::var(0)
            .mul_ref(&Poly::var(3))
            .sub_ref(&Poly::var(1).mul_ref(&Poly::var(2)));
        assert_eq!(LinearSpan::new(&rel), LinearSpan::new([&det]));
    }
}
