//! Block coordinates on spaces of equivariant maps.
//!
//! For each irreducible `w` of dimension `d` with multiplicity `m` in a
//! module `V`, intertwiners `M_w -> V` are obtained by averaging elementary
//! maps over the group, scanning the elementary maps in a fixed order and
//! keeping the first `m` independent ones. Their columns, ordered by
//! (irreducible, copy, basis index), form an adapted basis of `V`. An
//! equivariant map `F: U -> V` then becomes block diagonal, with block
//! `(w; r, c)` equal to `a_rc` times the identity, and `(a_rc)` is the
//! block of `F` for `w`. Since every copy uses the same model `M_w`,
//! composition of maps is blockwise matrix product.

use num_traits::Zero;

use super::{GModule, GroupError};
use crate::algebra::span::VectorSpan;
use crate::algebra::{Matrix, Ring, Scalar};
use crate::Mat;

/// An isotypic-adapted basis of one module.
#[derive(Clone, Debug)]
pub struct IsotypicBasis {
    multiplicities: Vec<usize>,
    dims: Vec<usize>,
    /// Columns ordered by (irreducible, copy, basis index).
    adapted: Mat,
    adapted_inv: Mat,
}

impl IsotypicBasis {
    pub fn new(module: &GModule) -> Result<Self, GroupError> {
        let sym = module.symmetry();
        let group = sym.group();
        let n = module.dim();
        let multiplicities = module.multiplicities()?;
        let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        let mut dims = Vec::new();
        for (w, &m) in sym.irreps().iter().zip(&multiplicities) {
            let d = w.dim();
            dims.push(d);
            if m == 0 {
                continue;
            }
            let mut span = VectorSpan::new(n * d);
            let mut copies: Vec<Vec<Vec<Scalar>>> = Vec::new();
            'scan: for a in 0..n {
                for b in 0..d {
                    // Column j of sum_g g E_ab w(g^-1) is sum_g w(g^-1)[b][j] * g e_a.
                    let mut t = vec![vec![Scalar::zero(); n]; d];
                    for g in 0..group.order() {
                        let rg = w.matrix(group.inv(g));
                        let col = module.action(g).column(a);
                        for (j, tj) in t.iter_mut().enumerate() {
                            let c = &rg[(b, j)];
                            if c.is_zero() {
                                continue;
                            }
                            for (i, v) in col {
                                tj[*i].add_assign_ref(&v.mul_ref(c));
                            }
                        }
                    }
                    let flat: Vec<Scalar> = t.iter().flatten().cloned().collect();
                    if span.insert(&flat) {
                        copies.push(t);
                        if copies.len() == m {
                            break 'scan;
                        }
                    }
                }
            }
            if copies.len() != m {
                return Err(GroupError::Irrep(format!(
                    "found {} of {m} copies of {}",
                    copies.len(),
                    w.name
                )));
            }
            for t in copies {
                columns.extend(t);
            }
        }
        let adapted = Matrix::from_columns(&columns, n);
        let adapted_inv = adapted
            .inverse()
            .map_err(|_| GroupError::Irrep("intertwiner images are dependent".into()))?;
        Ok(IsotypicBasis {
            multiplicities,
            dims,
            adapted,
            adapted_inv,
        })
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Adapted basis vectors as columns.
    pub fn adapted(&self) -> &Mat {
        &self.adapted
    }

    pub fn adapted_inv(&self) -> &Mat {
        &self.adapted_inv
    }

    /// Irreducible index of each adapted basis vector.
    pub fn types(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, (&m, &d)) in self.multiplicities.iter().zip(&self.dims).enumerate() {
            out.extend(std::iter::repeat_n(i, m * d));
        }
        out
    }

    /// Adapted columns holding basis index 0 of each copy, grouped by
    /// irreducible.
    fn leading_columns(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (&m, &d) in self.multiplicities.iter().zip(&self.dims) {
            out.push((0..m).map(|c| start + c * d).collect());
            start += m * d;
        }
        out
    }
}

/// Block coordinates on `Hom_G(U, V)`.
#[derive(Clone, Debug)]
pub struct HomBlocks {
    /// Target multiplicities, the row counts of the blocks.
    rows: Vec<usize>,
    /// Source multiplicities, the column counts of the blocks.
    cols: Vec<usize>,
    dims: Vec<usize>,
    target_rows: Vec<Mat>,
    source_cols: Vec<Mat>,
    target: IsotypicBasis,
    source: IsotypicBasis,
}

impl HomBlocks {
    pub fn new(source: &IsotypicBasis, target: &IsotypicBasis) -> Self {
        let target_rows = target
            .leading_columns()
            .iter()
            .map(|rows| {
                let all: Vec<usize> = (0..target.adapted_inv.cols()).collect();
                target.adapted_inv.submatrix(rows, &all)
            })
            .collect();
        let source_cols = source
            .leading_columns()
            .iter()
            .map(|cols| {
                let all: Vec<usize> = (0..source.adapted.rows()).collect();
                source.adapted.submatrix(&all, cols)
            })
            .collect();
        HomBlocks {
            rows: target.multiplicities.clone(),
            cols: source.multiplicities.clone(),
            dims: target.dims.clone(),
            target_rows,
            source_cols,
            target: target.clone(),
            source: source.clone(),
        }
    }

    pub fn between(source: &GModule, target: &GModule) -> Result<Self, GroupError> {
        Ok(Self::new(
            &IsotypicBasis::new(source)?,
            &IsotypicBasis::new(target)?,
        ))
    }

    /// Block row counts, the multiplicities in the target.
    pub fn row_shape(&self) -> &[usize] {
        &self.rows
    }

    /// Block column counts, the multiplicities in the source.
    pub fn col_shape(&self) -> &[usize] {
        &self.cols
    }

    /// Total number of block entries, equal to `dim Hom_G(U, V)`.
    pub fn entry_count(&self) -> usize {
        self.rows.iter().zip(&self.cols).map(|(r, c)| r * c).sum()
    }

    /// Blocks of an equivariant map given as a `dim V x dim U` matrix.
    pub fn blocks_of_map(&self, f: &Mat) -> Vec<Mat> {
        self.target_rows
            .iter()
            .zip(&self.source_cols)
            .map(|(r, c)| r.mul(f).mul(c))
            .collect()
    }

    /// The equivariant map with the given blocks.
    pub fn map_of_blocks(&self, blocks: &[Mat]) -> Mat {
        let n = self.target.adapted.rows();
        let k = self.source.adapted.rows();
        let mut middle = Matrix::zeros(n, k);
        let (mut r0, mut c0) = (0, 0);
        for (i, b) in blocks.iter().enumerate() {
            let d = self.dims[i];
            for r in 0..self.rows[i] {
                for c in 0..self.cols[i] {
                    for j in 0..d {
                        middle[(r0 + r * d + j, c0 + c * d + j)] = b[(r, c)].clone();
                    }
                }
            }
            r0 += self.rows[i] * d;
            c0 += self.cols[i] * d;
        }
        self.target
            .adapted
            .mul(&middle)
            .mul(&self.source.adapted_inv)
    }

    /// Flattens blocks in (block, row, column) order.
    pub fn flatten(&self, blocks: &[Mat]) -> Vec<Scalar> {
        blocks
            .iter()
            .flat_map(|b| b.data().iter().cloned())
            .collect()
    }

    /// Inverse of [`HomBlocks::flatten`].
    pub fn unflatten<F: Ring>(&self, entries: &[F]) -> Vec<Matrix<F>> {
        let mut out = Vec::new();
        let mut pos = 0;
        for (&r, &c) in self.rows.iter().zip(&self.cols) {
            out.push(Matrix::from_fn(r, c, |i, j| {
                entries[pos + i * c + j].clone()
            }));
            pos += r * c;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grouprep::{FiniteGroup, Symmetry};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_equivariant(u: &GModule, v: &GModule, rng: &mut ChaCha8Rng) -> Mat {
        let raw = Matrix::from_fn(v.dim(), u.dim(), |_, _| Scalar::int(rng.gen_range(-3..=3)));
        let g = u.group();
        let mut acc = Matrix::zeros(v.dim(), u.dim());
        for e in 0..g.order() {
            let term = v
                .action(e)
                .to_dense()
                .mul(&raw)
                .mul(&u.action(g.inv(e)).to_dense());
            acc = acc.add(&term);
        }
        acc.map(|x| x.mul_ref(&Scalar::frac(1, g.order() as i64)))
    }

    #[test]
    fn regular_z2_blocks() {
        let sym =
            Symmetry::new(FiniteGroup::from_cycles(&["1", "x"], &["(1 x)"]).unwrap()).unwrap();
        let m = GModule::natural(sym);
        let h = HomBlocks::between(&m, &m).unwrap();
        assert_eq!(h.row_shape(), &[1, 1]);
        assert_eq!(h.col_shape(), &[1, 1]);
        assert_eq!(h.entry_count(), 2);
    }

    #[test]
    fn blocks_compose_and_round_trip() {
        let sym = Symmetry::new(
            FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A C G T)", "(A G)"]).unwrap(),
        )
        .unwrap();
        let v = GModule::natural(sym.clone());
        let vv = GModule::tensor(&[&v, &v]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_equivariant(&v, &vv, &mut rng);
        let g = random_equivariant(&vv, &v, &mut rng);
        let bv = IsotypicBasis::new(&v).unwrap();
        let bvv = IsotypicBasis::new(&vv).unwrap();
        let hf = HomBlocks::new(&bv, &bvv);
        let hg = HomBlocks::new(&bvv, &bv);
        let hgf = HomBlocks::new(&bv, &bv);
        let (fb, gb) = (hf.blocks_of_map(&f), hg.blocks_of_map(&g));
        let composed: Vec<Mat> = gb.iter().zip(&fb).map(|(a, b)| a.mul(b)).collect();
        assert_eq!(hgf.blocks_of_map(&g.mul(&f)), composed);
        assert_eq!(hf.map_of_blocks(&fb), f);
    }

    #[test]
    fn trivial_group_gives_one_block() {
        let sym = Symmetry::new(FiniteGroup::trivial()).unwrap();
        let id = |n| Matrix::identity(n);
        let u = GModule::from_matrices(sym.clone(), vec!["a".into(), "b".into()], &[], id(2), None)
            .unwrap();
        let v = GModule::from_matrices(
            sym,
            vec!["x".into(), "y".into(), "z".into()],
            &[],
            id(3),
            None,
        )
        .unwrap();
        let h = HomBlocks::between(&u, &v).unwrap();
        assert_eq!(
            (h.row_shape(), h.col_shape()),
            (&[3usize][..], &[2usize][..])
        );
    }
}
