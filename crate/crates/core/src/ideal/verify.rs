//! Exact evaluation of generator sets at model points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{tree_coordinates, GeneratorSet, IdealError};
use crate::algebra::Rational;
use crate::model::{phi, psi, random_representation, StochasticRepresentation};
use crate::tree::SpacedTree;
use crate::{Poly, Scalar};

/// Outcome of evaluating generators at sample points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub samples: usize,
    pub generators: usize,
    /// `(generator index, sample index)` of every nonzero value.
    pub failures: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A homogeneous polynomial with rational coefficients, scaled to integer
/// coefficients. Its vanishing at a rational point can be decided at the
/// point scaled to integers.
struct IntegerForm {
    terms: Vec<(Vec<(usize, u32)>, BigInt)>,
}

impl IntegerForm {
    fn new(p: &Poly) -> Option<Self> {
        if !p.is_homogeneous() {
            return None;
        }
        let coeffs: Vec<&Rational> = p.terms().map(|(_, c)| c.as_rat()).collect::<Option<_>>()?;
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
        let terms = p
            .terms()
            .zip(coeffs)
            .map(|((m, _), c)| {
                let factors = m.factors().iter().map(|&(v, e)| (v as usize, e)).collect();
                (factors, c.numer() * (&lcm / c.denom()))
            })
            .collect();
        Some(IntegerForm { terms })
    }

    fn vanishes_at(&self, point: &[BigInt]) -> bool {
        let mut acc = BigInt::zero();
        for (factors, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in factors {
                for _ in 0..e {
                    t *= &point[v];
                }
            }
            acc += t;
        }
        acc.is_zero()
    }
}

/// The point times the least common multiple of its denominators.
fn integer_point(point: &[Scalar]) -> Option<Vec<BigInt>> {
    let rats: Vec<&Rational> = point.iter().map(|x| x.as_rat()).collect::<Option<_>>()?;
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    Some(
        rats.iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect(),
    )
}

fn evaluate_all(
    set: &GeneratorSet,
    points: impl Iterator<Item = Vec<Scalar>>,
) -> Result<VerifyReport, IdealError> {
    let mut report = VerifyReport {
        generators: set.len(),
        ..Default::default()
    };
    let forms: Vec<Option<IntegerForm>> = set
        .generators
        .iter()
        .map(|g| IntegerForm::new(&g.poly))
        .collect();
    for (s, point) in points.enumerate() {
        report.samples += 1;
        let scaled = integer_point(&point);
        for (i, g) in set.generators.iter().enumerate() {
            let zero = match (&forms[i], &scaled) {
                (Some(f), Some(x)) => {
                    if x.len() < set.vars.len() {
                        return Err(IdealError::Shape(format!(
                            "point of length {} for {} variables",
                            x.len(),
                            set.vars.len()
                        )));
                    }
                    f.vanishes_at(x)
                }
                _ => g.poly.eval(&point)?.is_zero(),
            };
            if !zero {
                report.failures.push((i, s));
            }
        }
    }
    Ok(report)
}

/// Evaluates generators in the invariant coordinates of `t` at
/// `Psi_T(A)` for seeded random equivariant `A`.
pub fn verify_on_model(
    t: &SpacedTree,
    set: &GeneratorSet,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport, IdealError> {
    let coords = tree_coordinates(t);
    let points = (0..samples).map(|k| {
        let a = random_representation(
            t,
            seed.wrapping_mul(1_000_003).wrapping_add(k as u64),
            true,
            9,
        );
        coords.coords(&psi(t, &a).into_data())
    });
    evaluate_all(set, points)
}

/// Evaluates generators in the full leaf-space coordinates at
/// `Phi_T(A, pi)` for seeded random equivariant stochastic `A` rooted at
/// `root` and arbitrary positive `pi`.
pub fn verify_on_distributions(
    t: &SpacedTree,
    root: &str,
    set: &GeneratorSet,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport, IdealError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5048_4921);
    let mut points = Vec::with_capacity(samples);
    for _ in 0..samples {
        let s = StochasticRepresentation::random(t, root, &mut rng, true)?;
        points.push(phi(t, &s)?.into_data());
    }
    evaluate_all(set, points.into_iter())
}
