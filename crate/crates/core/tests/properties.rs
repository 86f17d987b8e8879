use std::collections::HashMap;

use eqtree::algebra::minors::symbolic_minors;
use eqtree::algebra::span::LinearSpan;
use eqtree::algebra::{Matrix, Monomial, Ring};
use eqtree::grouprep::irreps::inner_product;
use eqtree::grouprep::{GModule, HomBlocks};
use eqtree::ideal::{
    degree_bounded_vanishing_ideal, tree_coordinates, tree_ideal, OracleConfig, StarIdealProvider,
};
use eqtree::io::presets::{general_quartet, preset_module, preset_star, two_star_tree, z2_star};
use eqtree::model::actions::reynolds_on_leaves;
use eqtree::model::representation::random_scalar;
use eqtree::model::{
    distribution_table, phi, psi, random_representation, StochasticRepresentation,
};
use eqtree::toric::{lattice_relations_up_to_degree, monomial_certificate};
use eqtree::tree::SpacedTree;
use eqtree::{Mat, Poly, Rational, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NVARS: u32 = 4;

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..3, NVARS as usize), -6i64..=6),
        0..6,
    )
    .prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|(exps, c)| {
            let m = Monomial::from_factors(
                exps.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v as u32, e)),
            );
            (m, Scalar::int(c))
        }))
    })
}

fn point_strategy() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), NVARS as usize)
        .prop_map(|v| v.into_iter().map(|(n, d)| Scalar::frac(n, d)).collect())
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn preset_names() -> [&'static str; 4] {
    ["JC69", "K80", "K81", "CS05"]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
        prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        prop_assert!(a.sub_ref(&a).is_zero());
    }

    #[test]
    fn coefficient_extraction_reassembles(p in poly_strategy(), split in 0u32..=NVARS) {
        let parts = p.coeff_extract(|v| v >= split);
        let total = parts.iter().fold(Poly::zero(), |acc, (m, h)| acc.add_ref(&h.mul_ref(&Poly::monomial(m.clone(), Scalar::one()))));
        prop_assert_eq!(total, p);
        for (m, h) in &parts {
            prop_assert!(m.factors().iter().all(|&(v, _)| v >= split));
            prop_assert!(h.variables().iter().all(|&v| v < split));
        }
    }

    #[test]
    fn substitution_commutes_with_evaluation(p in poly_strategy(), images in prop::collection::vec(poly_strategy(), NVARS as usize), pt in point_strategy()) {
        let map: HashMap<u32, Poly> = images.iter().cloned().enumerate().map(|(v, q)| (v as u32, q)).collect();
        let substituted = p.substitute(&map).unwrap();
        let inner: Vec<Scalar> = images.iter().map(|q| q.eval(&pt).unwrap()).collect();
        prop_assert_eq!(substituted.eval(&pt).unwrap(), p.eval(&inner).unwrap());
    }

    #[test]
    fn rational_arithmetic_matches_bigrational(a in (-1000i64..1000, 1i64..200), b in (-1000i64..1000, 1i64..200)) {
        let (x, y) = (Rational::new(a.0, a.1), Rational::new(b.0, b.1));
        let (bx, by) = (big(a.0, a.1), big(b.0, b.1));
        let same = |r: Rational, q: BigRational| r.to_string() == if q.is_integer() { q.numer().to_string() } else { q.to_string() };
        prop_assert!(same(x.clone() + y.clone(), &bx + &by));
        prop_assert!(same(x.clone() - y.clone(), &bx - &by));
        prop_assert!(same(x.clone() * y.clone(), &bx * &by));
        if b.0 != 0 {
            prop_assert!(same(x.clone() / y.clone(), &bx / &by));
        }
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
    }

    #[test]
    fn minors_vanish_below_full_rank(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = n - 1;
        let low: Mat = Matrix::from_fn(n, r, |_, _| random_scalar(&mut rng, 7)).mul(&Matrix::from_fn(r, n, |_, _| random_scalar(&mut rng, 7)));
        let symbolic = Matrix::from_fn(n, n, |i, j| Poly::var((i * n + j) as u32));
        let point = low.data().to_vec();
        for m in symbolic_minors(&symbolic, n) {
            prop_assert!(m.eval(&point).unwrap().is_zero());
        }
    }

    #[test]
    fn reynolds_is_idempotent_and_invariant(seed in any::<u64>(), which in 0usize..4) {
        let m = preset_module(preset_names()[which]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<Scalar> = (0..m.dim()).map(|_| random_scalar(&mut rng, 9)).collect();
        let r = m.reynolds(&v);
        prop_assert_eq!(m.reynolds(&r), r.clone());
        for g in 0..m.group().order() {
            prop_assert_eq!(m.reynolds(&m.act(g, &v)), r.clone());
        }
    }

    #[test]
    fn hom_blocks_are_functorial(seed in any::<u64>(), which in 0usize..4) {
        let u = preset_module(preset_names()[which]).unwrap();
        let v = GModule::tensor(&[&u, &u]).unwrap();
        let w = GModule::regular(u.symmetry().clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = equivariant_map(&u, &v, &mut rng);
        let g = equivariant_map(&v, &w, &mut rng);
        let (uv, vw, uw) = (HomBlocks::between(&u, &v).unwrap(), HomBlocks::between(&v, &w).unwrap(), HomBlocks::between(&u, &w).unwrap());
        let composed = uw.blocks_of_map(&g.mul(&f));
        let product: Vec<Mat> = vw.blocks_of_map(&g).iter().zip(uv.blocks_of_map(&f)).map(|(a, b)| a.mul(&b)).collect();
        prop_assert_eq!(composed, product);
    }

    #[test]
    fn phi_matches_summation_over_hidden_states(seed in any::<u64>(), which in 0usize..3, leaf_root in any::<bool>()) {
        let t = [preset_star("K81", 3), preset_star("CS05", 3), general_quartet(2)].into_iter().nth(which).unwrap().unwrap();
        let root = if leaf_root { t.leaves()[0].clone() } else { t.internal()[0].clone() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = StochasticRepresentation::random(&t, &root, &mut rng, which < 2).unwrap();
        let table = distribution_table(&t, &phi(&t, &s).unwrap()).unwrap();
        let expected = hidden_sum(&t, &s);
        prop_assert_eq!(table.len(), expected.len());
        for ((labels, p), q) in table.iter().zip(&expected) {
            prop_assert_eq!(p, q, "at {:?}", labels);
        }
    }

    #[test]
    fn equivariant_psi_is_invariant(seed in any::<u64>(), which in 0usize..3) {
        let t = [z2_star(4), two_star_tree(), preset_star("K80", 3)].into_iter().nth(which).unwrap().unwrap();
        let v = psi(&t, &random_representation(&t, seed, true, 9));
        prop_assert_eq!(reynolds_on_leaves(&t, &v), v);
    }
}

/// A random map `U -> V` averaged over the group.
fn equivariant_map(u: &GModule, v: &GModule, rng: &mut ChaCha8Rng) -> Mat {
    let group = u.group();
    let raw: Mat = Matrix::from_fn(v.dim(), u.dim(), |_, _| random_scalar(rng, 5));
    let mut acc: Mat = Matrix::zeros(v.dim(), u.dim());
    for g in 0..group.order() {
        acc = acc.add(
            &v.action(g)
                .to_dense()
                .mul(&raw)
                .mul(&u.action(group.inv(g)).to_dense()),
        );
    }
    acc
}

/// Leaf-state probabilities by summing over every assignment of the
/// internal vertices, for trees with the standard basis at every vertex.
fn hidden_sum(t: &SpacedTree, s: &StochasticRepresentation) -> Vec<Scalar> {
    let vertices: Vec<String> = t.vertices().cloned().collect();
    let dims: Vec<usize> = vertices.iter().map(|v| t.module(v).dim()).collect();
    let leaves = t.leaves();
    let leaf_dims: Vec<usize> = leaves.iter().map(|l| t.module(l).dim()).collect();
    let mut out = vec![Scalar::zero(); leaf_dims.iter().product()];
    let total: usize = dims.iter().product();
    for index in 0..total {
        let mut state = HashMap::new();
        let mut rest = index;
        for (v, &d) in vertices.iter().zip(&dims).rev() {
            state.insert(v.clone(), rest % d);
            rest /= d;
        }
        let mut p = s.root_distribution[state[&s.root]].clone();
        for ((parent, child), m) in &s.matrices {
            p = p.mul_ref(&m[(state[child], state[parent])]);
        }
        let slot = leaves
            .iter()
            .zip(&leaf_dims)
            .fold(0, |acc, (l, &d)| acc * d + state[l]);
        out[slot] = out[slot].add_ref(&p);
    }
    out
}

#[test]
fn characters_are_orthonormal() {
    for name in preset_names() {
        let m = preset_module(name).unwrap();
        let sym = m.symmetry();
        let irreps = sym.irreps();
        for (i, a) in irreps.iter().enumerate() {
            for (j, b) in irreps.iter().enumerate() {
                let expected = if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                };
                assert_eq!(
                    inner_product(sym.group(), a.character(), b.character()),
                    expected,
                    "{name}: {i}, {j}"
                );
            }
        }
    }
}

#[test]
fn multiplicities_account_for_dimension() {
    for name in preset_names() {
        let m = preset_module(name).unwrap();
        let modules = [
            m.clone(),
            GModule::regular(m.symmetry().clone()),
            GModule::tensor(&[&m, &m]).unwrap(),
        ];
        for v in &modules {
            let mult = v.multiplicities().unwrap();
            let total: usize = mult
                .iter()
                .zip(v.symmetry().irreps())
                .map(|(k, w)| k * w.dim())
                .sum();
            assert_eq!(total, v.dim(), "{name}");
        }
    }
}

fn test_trees() -> Vec<SpacedTree> {
    vec![
        z2_star(4).unwrap(),
        two_star_tree().unwrap(),
        preset_star("K81", 3).unwrap(),
        general_quartet(2).unwrap(),
    ]
}

#[test]
fn branches_partition_the_edges() {
    for t in test_trees() {
        let edges = t.edges().len();
        for q in t.internal() {
            let branches = t.branches_at(&q).unwrap();
            assert_eq!(
                branches.iter().map(|b| b.edges().len()).sum::<usize>(),
                edges
            );
            let mut seen = std::collections::BTreeSet::new();
            for b in &branches {
                for (x, y) in b.edges() {
                    assert!(
                        seen.insert((x.clone().min(y.clone()), x.max(y))),
                        "edge shared between branches"
                    );
                }
            }
            assert!(SpacedTree::glue(&branches, &q).unwrap().same_as(&t));
        }
    }
}

#[test]
fn flattening_keeps_the_leaf_space() {
    for t in test_trees() {
        for q in t.internal() {
            let (flat, _) = t.flatten_at(&q).unwrap();
            assert_eq!(flat.leaf_space_dim(), t.leaf_space_dim());
        }
    }
}

#[test]
fn valency_two_insertion_adds_no_large_stars() {
    for t in test_trees() {
        for (p, r) in t.edges() {
            let (refined, _, _) = t.insert_valency2(&p, &r).unwrap();
            assert_eq!(refined.large_substar_count(), t.large_substar_count());
        }
    }
}

#[test]
fn assembled_output_is_deterministic() {
    let t = two_star_tree().unwrap();
    let provider = StarIdealProvider::oracle(OracleConfig::default());
    let a = tree_ideal(&t, &provider).unwrap().texts();
    let b = tree_ideal(&t, &provider).unwrap().texts();
    assert_eq!(a, b);
    let s = preset_star("K81", 3).unwrap();
    let c = degree_bounded_vanishing_ideal(&s, &OracleConfig::default())
        .unwrap()
        .texts();
    let d = degree_bounded_vanishing_ideal(&s, &OracleConfig::default())
        .unwrap()
        .texts();
    assert_eq!(c, d);
}

#[test]
fn four_star_lattice_binomials_span_the_oracle_quadrics() {
    let t = z2_star(4).unwrap();
    let cert = monomial_certificate(&t).unwrap();
    let binomials = lattice_relations_up_to_degree(&cert.matrix, 2, 10_000).unwrap();
    let oracle = degree_bounded_vanishing_ideal(&cert.tree, &OracleConfig::default()).unwrap();
    assert_eq!(tree_coordinates(&cert.tree).dim(), 8);
    assert_eq!(
        LinearSpan::new(&binomials),
        LinearSpan::new(&oracle.polys()).degree_part(2)
    );
}
