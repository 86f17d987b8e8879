//! Linear changes of coordinates between tensor spaces.

use std::collections::HashMap;

use num_traits::Zero;

use crate::algebra::Monomial;
use crate::model::{InvariantCoordinates, LeafTensor};
use crate::{Mat, Poly, Scalar};

/// Linear forms `out_i = sum_j columns[j][i] x_{offset + j}`, where
/// `columns[j]` is the image of the `j`-th unit vector.
pub fn linear_forms(columns: &[Vec<Scalar>], rows: usize, offset: u32) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); rows];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            if !c.is_zero() {
                out[i].add_term(Monomial::var(offset + j as u32), c);
            }
        }
    }
    out
}

/// Substitutes `images[v]` for every variable `v` of each polynomial.
pub fn substitute_all(polys: &[Poly], images: &[Poly]) -> Vec<Poly> {
    polys
        .iter()
        .map(|p| {
            p.substitute_with(|v| images.get(v as usize))
                .expect("every variable has an image")
        })
        .collect()
}

/// Substitutes through a map; missing variables are an error.
pub fn substitute_map(p: &Poly, images: &HashMap<u32, Poly>) -> Poly {
    p.substitute_with(|v| images.get(&v))
        .expect("every variable has an image")
}

/// Images of the unit coordinate vectors of `source` under `map`,
/// read back in the coordinates of `target`.
pub fn transport_columns(
    source: &InvariantCoordinates,
    target: &InvariantCoordinates,
    map: impl Fn(Vec<Scalar>) -> Vec<Scalar>,
) -> Vec<Vec<Scalar>> {
    (0..source.dim())
        .map(|j| {
            let mut unit = vec![Scalar::zero(); source.dim()];
            unit[j] = Scalar::one();
            target.coords(&map(source.vector(&unit)))
        })
        .collect()
}

/// Applies one matrix per factor of a flat tensor.
pub fn map_factors(
    factors: &[String],
    dims: &[usize],
    data: Vec<Scalar>,
    maps: &[&Mat],
) -> Vec<Scalar> {
    let mut t = LeafTensor::new(factors.to_vec(), dims.to_vec(), data);
    for (f, m) in factors.iter().zip(maps) {
        t = t.map_factor(f, m);
    }
    t.into_data()
}
