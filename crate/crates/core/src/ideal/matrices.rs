//! Symbolic block matrices: rank conditions and contracted ideals.

use crate::algebra::minors::symbolic_minors;
use crate::algebra::{Label, Matrix, Ring};
use crate::Poly;

use super::IdealError;

/// Which side the fresh factor multiplies from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `f(Psi * Psi0)`, for generators on the left factor of a product.
    Left,
    /// `f(Psi0 * Psi)`, for generators on the right factor.
    Right,
}

/// One matrix of fresh variables per block, numbered from `offset` in
/// (block, row, column) order, labelled `role[i,r,c]`.
pub fn symbolic_blocks(
    rows: &[usize],
    cols: &[usize],
    role: &str,
    offset: u32,
) -> (Vec<Matrix<Poly>>, Vec<Label>) {
    let mut next = offset;
    let mut labels = Vec::new();
    let mut blocks = Vec::with_capacity(rows.len());
    for (i, (&r, &c)) in rows.iter().zip(cols).enumerate() {
        blocks.push(Matrix::from_fn(r, c, |a, b| {
            Poly::var(next + (a * c + b) as u32)
        }));
        for a in 0..r {
            for b in 0..c {
                labels.push(Label::new(
                    role,
                    vec![i.to_string(), a.to_string(), b.to_string()],
                ));
            }
        }
        next += (r * c) as u32;
    }
    (blocks, labels)
}

/// Entries of all blocks in (block, row, column) order.
pub fn flatten_blocks<F: Ring>(blocks: &[Matrix<F>]) -> Vec<F> {
    blocks
        .iter()
        .flat_map(|b| b.data().iter().cloned())
        .collect()
}

/// Blockwise product.
pub fn block_product(
    a: &[Matrix<Poly>],
    b: &[Matrix<Poly>],
) -> Result<Vec<Matrix<Poly>>, IdealError> {
    if a.len() != b.len() {
        return Err(IdealError::Shape(format!(
            "{} blocks against {}",
            a.len(),
            b.len()
        )));
    }
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            if x.cols() != y.rows() {
                return Err(IdealError::Shape(format!(
                    "block {i}: {}x{} times {}x{}",
                    x.rows(),
                    x.cols(),
                    y.rows(),
                    y.cols()
                )));
            }
            Ok(Matrix::from_fn(x.rows(), y.cols(), |r, c| {
                let mut acc = Poly::zero();
                for k in 0..x.cols() {
                    let (u, v) = (&x[(r, k)], &y[(k, c)]);
                    if !u.is_zero() && !v.is_zero() {
                        acc.add_assign_poly(&u.mul_ref(v));
                    }
                }
                acc
            }))
        })
        .collect()
}

/// All `(l_i + 1)`-minors of block `i`, for every block where the rank
/// bound `l_i` is a real condition.
pub fn rank_minors(blocks: &[Matrix<Poly>], bound: &[usize]) -> Vec<Poly> {
    blocks
        .iter()
        .zip(bound)
        .filter(|(b, &l)| l < b.rows().min(b.cols()))
        .flat_map(|(b, &l)| symbolic_minors(b, l + 1))
        .collect()
}

/// The contracted ideal of `generators` along a symbolic product.
///
/// `target` holds the blocks of the symbolic point `Psi` (shape `k x m`).
/// A fresh `Psi0` is allocated from variable `aux_offset` on: of shape
/// `m x l` for [`Side::Left`] and `l x k` for [`Side::Right`]. The product
/// blocks are handed to `pullback`, which returns the image of every
/// variable of the generators; each generator is then expanded and its
/// coefficients with respect to the entries of `Psi0` are collected.
pub fn contracted_ideal(
    generators: &[Poly],
    side: Side,
    target: &[Matrix<Poly>],
    bound: &[usize],
    aux_offset: u32,
    pullback: &dyn Fn(&[Matrix<Poly>]) -> Vec<Poly>,
) -> Result<Vec<Poly>, IdealError> {
    if generators.is_empty() {
        return Ok(Vec::new());
    }
    if target.len() != bound.len() {
        return Err(IdealError::Shape(format!(
            "{} blocks but {} rank bounds",
            target.len(),
            bound.len()
        )));
    }
    let (rows, cols): (Vec<usize>, Vec<usize>) = match side {
        Side::Left => (target.iter().map(|b| b.cols()).collect(), bound.to_vec()),
        Side::Right => (bound.to_vec(), target.iter().map(|b| b.rows()).collect()),
    };
    let (fresh, _) = symbolic_blocks(&rows, &cols, "y", aux_offset);
    let product = match side {
        Side::Left => block_product(target, &fresh)?,
        Side::Right => block_product(&fresh, target)?,
    };
    let images = pullback(&product);
    let mut out = Vec::new();
    for f in generators {
        let expanded = f
            .substitute_with(|v| images.get(v as usize))
            .map_err(|v| IdealError::Shape(format!("generator variable {v} has no image")))?;
        out.extend(
            expanded
                .coeff_extract(|v| v >= aux_offset)
                .into_iter()
                .map(|(_, h)| h),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polynomial::canonicalize;
    use crate::algebra::Monomial;
    use crate::Scalar;

    #[test]
    fn block_minor_counts() {
        let (blocks, labels) = symbolic_blocks(&[4, 4], &[4, 4], "x", 0);
        assert_eq!(labels.len(), 32);
        assert_eq!(labels[17].to_string(), "x[1,0,1]");
        assert_eq!(rank_minors(&blocks, &[1, 1]).len(), 72);
        assert!(rank_minors(&blocks, &[4, 5]).is_empty());
        let (ones, _) = symbolic_blocks(&[1], &[1], "x", 0);
        assert_eq!(rank_minors(&ones, &[0]), vec![Poly::var(0)]);
    }

    #[test]
    fn linear_generator_contracts_to_a_row() {
        // Psi is 2x2 with variables 0..4; the generator is the (0,0) entry
        // of a 2x1 product, so its coefficients are the first row of Psi.
        let (psi, _) = symbolic_blocks(&[2], &[2], "z", 0);
        let f = vec![Poly::var(0)];
        let out = contracted_ideal(&f, Side::Left, &psi, &[1], 4, &|p| flatten_blocks(p)).unwrap();
        assert_eq!(
            canonicalize(out),
            canonicalize(vec![Poly::var(0), Poly::var(1)])
        );
        let right =
            contracted_ideal(&f, Side::Right, &psi, &[1], 4, &|p| flatten_blocks(p)).unwrap();
        assert_eq!(
            canonicalize(right),
            canonicalize(vec![Poly::var(0), Poly::var(2)])
        );
        assert!(
            contracted_ideal(&[], Side::Left, &psi, &[1], 4, &|p| flatten_blocks(p))
                .unwrap()
                .is_empty()
        );
    }

    #[test]
    fn determinant_of_a_product() {
        // det(Psi * Psi0) for 2x2 blocks expands to det(Psi) det(Psi0).
        let (psi, _) = symbolic_blocks(&[2], &[2], "z", 0);
        let det = Poly::from_terms([
            (Monomial::from_factors([(0, 1), (3, 1)]), Scalar::one()),
            (Monomial::from_factors([(1, 1), (2, 1)]), -Scalar::one()),
        ]);
        let out = contracted_ideal(&[det.clone()], Side::Left, &psi, &[2], 4, &|p| {
            flatten_blocks(p)
        })
        .unwrap();
        assert_eq!(canonicalize(out), canonicalize(vec![det]));
    }
}
