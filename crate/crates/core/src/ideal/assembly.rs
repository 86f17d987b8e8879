//! The recursive construction of tree ideals from star ideals, and the
//! constructions built on it.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::linear::{linear_forms, substitute_all, transport_columns};
use super::matrices::{contracted_ideal, flatten_blocks, rank_minors, Side};
use super::provider::StarIdealProvider;
use super::{tree_coordinates, var_table, GeneratorSet, IdealError, Provenance};
use crate::algebra::{Label, Matrix, VarTable};
use crate::grouprep::{GModule, HomBlocks};
use crate::model::tensor::digits;
use crate::model::{InvariantCoordinates, LeafTensor};
use crate::tree::SpacedTree;
use crate::{Mat, Poly, Scalar};

/// Invariant tensors over named factors, read as equivariant maps from the
/// tensor product of the column factors to that of the row factors (by
/// contracting with the form on the column factors), in block coordinates.
pub struct Split {
    order: Vec<String>,
    dims: Vec<usize>,
    rows: Vec<String>,
    cols: Vec<String>,
    row_dim: usize,
    col_dim: usize,
    col_form: Mat,
    col_form_inv: Mat,
    blocks: HomBlocks,
    coords: InvariantCoordinates,
}

impl Split {
    /// `modules` lists the factors in their own order; `rows` and `cols`
    /// partition their names.
    pub fn new(
        modules: &[(String, &GModule)],
        rows: &[String],
        cols: &[String],
    ) -> Result<Self, IdealError> {
        let find = |name: &String| -> Result<&GModule, IdealError> {
            modules
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, m)| *m)
                .ok_or_else(|| IdealError::Invalid(format!("no factor '{name}'")))
        };
        let row_modules = rows.iter().map(find).collect::<Result<Vec<_>, _>>()?;
        let col_modules = cols.iter().map(find).collect::<Result<Vec<_>, _>>()?;
        if rows.len() + cols.len() != modules.len() {
            return Err(IdealError::Invalid(
                "rows and columns must partition the factors".into(),
            ));
        }
        let row_module = GModule::tensor(&row_modules)?;
        let col_module = GModule::tensor(&col_modules)?;
        let blocks = HomBlocks::between(&col_module, &row_module)?;
        let col_form = col_module.form().clone();
        let col_form_inv = col_form.inverse()?;
        let refs: Vec<&GModule> = modules.iter().map(|(_, m)| *m).collect();
        Ok(Split {
            order: modules.iter().map(|(n, _)| n.clone()).collect(),
            dims: refs.iter().map(|m| m.dim()).collect(),
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            row_dim: row_module.dim(),
            col_dim: col_module.dim(),
            col_form,
            col_form_inv,
            blocks,
            coords: InvariantCoordinates::new("z", &refs),
        })
    }

    /// The split of a tree's leaf space.
    pub fn of_tree(t: &SpacedTree, rows: &[String], cols: &[String]) -> Result<Self, IdealError> {
        let modules: Vec<(String, &GModule)> = t
            .leaves()
            .into_iter()
            .map(|l| (l.clone(), t.module(&l)))
            .collect();
        Self::new(&modules, rows, cols)
    }

    pub fn hom_blocks(&self) -> &HomBlocks {
        &self.blocks
    }

    pub fn coordinates(&self) -> &InvariantCoordinates {
        &self.coords
    }

    fn split_order(&self) -> Vec<String> {
        self.rows.iter().chain(&self.cols).cloned().collect()
    }

    /// Flattened block entries of the map of a tensor given in factor order.
    pub fn blocks_of_tensor(&self, v: Vec<Scalar>) -> Vec<Scalar> {
        let t =
            LeafTensor::new(self.order.clone(), self.dims.clone(), v).permuted(&self.split_order());
        let z = Matrix::from_fn(self.row_dim, self.col_dim, |i, j| {
            t.data()[i * self.col_dim + j].clone()
        });
        self.blocks
            .flatten(&self.blocks.blocks_of_map(&z.mul(&self.col_form)))
    }

    /// The tensor, in factor order, whose map has the given block entries.
    pub fn tensor_of_blocks(&self, entries: &[Scalar]) -> Vec<Scalar> {
        let f = self.blocks.map_of_blocks(&self.blocks.unflatten(entries));
        let z = f.mul(&self.col_form_inv);
        let split = self.split_order();
        let dims: Vec<usize> = split
            .iter()
            .map(|n| self.dims[self.order.iter().position(|o| o == n).unwrap()])
            .collect();
        LeafTensor::new(split, dims, z.data().to_vec())
            .permuted(&self.order)
            .into_data()
    }

    /// Block matrices whose entries are linear forms in the invariant
    /// coordinates (variables `0..dim`).
    pub fn symbolic_blocks(&self) -> Vec<Matrix<Poly>> {
        let columns: Vec<Vec<Scalar>> = (0..self.coords.dim())
            .map(|j| {
                let mut unit = vec![Scalar::zero(); self.coords.dim()];
                unit[j] = Scalar::one();
                self.blocks_of_tensor(self.coords.vector(&unit))
            })
            .collect();
        self.blocks
            .unflatten(&linear_forms(&columns, self.blocks.entry_count(), 0))
    }

    /// For each block entry, the invariant coordinates of its unit map.
    pub fn coordinate_columns(&self) -> Vec<Vec<Scalar>> {
        let n = self.blocks.entry_count();
        (0..n)
            .map(|e| {
                let mut unit = vec![Scalar::zero(); n];
                unit[e] = Scalar::one();
                self.coords.coords(&self.tensor_of_blocks(&unit))
            })
            .collect()
    }
}

/// Images of the invariant coordinates of a split when its map is the
/// given symbolic block matrix.
fn coordinate_images(
    columns: &[Vec<Scalar>],
    ncoords: usize,
    blocks: &[Matrix<Poly>],
) -> Vec<Poly> {
    let entries = flatten_blocks(blocks);
    let mut out = vec![Poly::zero(); ncoords];
    for (col, entry) in columns.iter().zip(&entries) {
        if entry.is_zero() {
            continue;
        }
        for (i, c) in col.iter().enumerate() {
            if !c.is_zero() {
                out[i].add_assign_poly(&entry.scale_by(c));
            }
        }
    }
    out
}

/// The block shapes `(k, l, m)` at a valency-2 vertex `q`: multiplicities
/// in the leaf space on the side of the smaller neighbour, in `V_q`, and on
/// the other side.
pub fn split_shapes(
    t: &SpacedTree,
    q: &str,
) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>), IdealError> {
    let (whole, left, _, _, _) = split_at(t, q)?;
    Ok((
        whole.blocks.row_shape().to_vec(),
        left.blocks.col_shape().to_vec(),
        whole.blocks.col_shape().to_vec(),
    ))
}

fn split_at(
    t: &SpacedTree,
    q: &str,
) -> Result<(Split, Split, Split, SpacedTree, SpacedTree), IdealError> {
    if t.valency(q) != 2 {
        return Err(IdealError::Invalid(format!(
            "vertex '{q}' does not have valency 2"
        )));
    }
    let nb: Vec<String> = t.neighbors(q).iter().cloned().collect();
    let t1 = t.branch(q, &nb[0])?;
    let t2 = t.branch(q, &nb[1])?;
    let l1: Vec<String> = t1.leaves().into_iter().filter(|v| v != q).collect();
    let l2: Vec<String> = t2.leaves().into_iter().filter(|v| v != q).collect();
    let qv = vec![q.to_string()];
    let whole = Split::of_tree(t, &l1, &l2)?;
    let left = Split::of_tree(&t1, &l1, &qv)?;
    let right = Split::of_tree(&t2, &qv, &l2)?;
    if left.blocks.row_shape() != whole.blocks.row_shape()
        || right.blocks.col_shape() != whole.blocks.col_shape()
        || right.blocks.row_shape() != left.blocks.col_shape()
    {
        return Err(IdealError::Shape(format!(
            "inconsistent multiplicities at '{q}'"
        )));
    }
    Ok((whole, left, right, t1, t2))
}

/// Generators of the ideal of the equivariant model of `t`, assembled from
/// star ideals by recursive splitting at valency-2 vertices.
pub fn tree_ideal(
    t: &SpacedTree,
    provider: &StarIdealProvider,
) -> Result<GeneratorSet, IdealError> {
    if t.vertex_count() == 2 {
        return Ok(GeneratorSet::new(var_table(&tree_coordinates(t))));
    }
    if t.centre().is_some() && t.leaves().len() >= 3 {
        return provider.star_ideal(t);
    }
    if let Some(q) = t.internal().into_iter().find(|v| t.valency(v) == 2) {
        return split_ideal(t, &q, provider);
    }
    let (p, r) = t
        .edges()
        .into_iter()
        .find(|(a, b)| !t.is_leaf(a) && !t.is_leaf(b))
        .ok_or_else(|| IdealError::Invalid("no internal edge to refine".into()))?;
    let (refined, _, _) = t.insert_valency2(&p, &r)?;
    // Same leaves and modules, hence the same coordinates.
    tree_ideal(&refined, provider)
}

fn split_ideal(
    t: &SpacedTree,
    q: &str,
    provider: &StarIdealProvider,
) -> Result<GeneratorSet, IdealError> {
    let (whole, left, right, t1, t2) = split_at(t, q)?;
    let f1 = tree_ideal(&t1, provider)?;
    let f2 = tree_ideal(&t2, provider)?;
    let mut out = GeneratorSet::new(var_table(&whole.coords));
    let l = left.blocks.col_shape().to_vec();
    let psi = whole.symbolic_blocks();
    out.extend(rank_minors(&psi, &l), Provenance::Minor);
    out.extend(
        contract_split(&whole, &left, Side::Left, &f1.polys())?,
        Provenance::Contracted,
    );
    out.extend(
        contract_split(&whole, &right, Side::Right, &f2.polys())?,
        Provenance::Contracted,
    );
    out.absorb_status(&f1);
    out.absorb_status(&f2);
    out.canonicalize();
    Ok(out)
}

fn contract_split(
    whole: &Split,
    part: &Split,
    side: Side,
    polys: &[Poly],
) -> Result<Vec<Poly>, IdealError> {
    let l = match side {
        Side::Left => part.blocks.col_shape().to_vec(),
        Side::Right => part.blocks.row_shape().to_vec(),
    };
    let columns = part.coordinate_columns();
    let n = part.coords.dim();
    let aux = whole.coords.dim() as u32;
    contracted_ideal(polys, side, &whole.symbolic_blocks(), &l, aux, &|prod| {
        coordinate_images(&columns, n, prod)
    })
}

/// The contracted ideal, in the coordinates of `t`, of generators given in
/// the coordinates of one branch at the valency-2 vertex `q`: the branch
/// towards the smaller neighbour for [`Side::Left`], the other for
/// [`Side::Right`].
pub fn contract_across(
    t: &SpacedTree,
    q: &str,
    side: Side,
    polys: &[Poly],
) -> Result<GeneratorSet, IdealError> {
    let (whole, left, right, _, _) = split_at(t, q)?;
    let part = if side == Side::Left { &left } else { &right };
    let mut out = GeneratorSet::new(var_table(&whole.coords));
    out.extend(
        contract_split(&whole, part, side, polys)?,
        Provenance::Contracted,
    );
    out.canonicalize();
    Ok(out)
}

/// The two branches at the valency-2 vertex `q`, towards the smaller and
/// the larger neighbour.
pub fn branches_at_split(t: &SpacedTree, q: &str) -> Result<(SpacedTree, SpacedTree), IdealError> {
    let (_, _, _, t1, t2) = split_at(t, q)?;
    Ok((t1, t2))
}

/// The sum over internal vertices `q` of the ideals of the flattenings at
/// `q`, each expressed in the coordinates of `t`.
pub fn flattening_ideal_sum(
    t: &SpacedTree,
    provider: &StarIdealProvider,
) -> Result<GeneratorSet, IdealError> {
    let coords = tree_coordinates(t);
    let mut out = GeneratorSet::new(var_table(&coords));
    let leaves = t.leaves();
    let dims = t.leaf_dims();
    for q in t.internal() {
        let (star, classes) = t.flatten_at(&q)?;
        let f = tree_ideal(&star, provider)?;
        let star_coords = tree_coordinates(&star);
        let order: Vec<String> = classes.concat();
        let columns = transport_columns(&coords, &star_coords, |v| {
            LeafTensor::new(leaves.clone(), dims.clone(), v)
                .permuted(&order)
                .into_data()
        });
        let images = linear_forms(&columns, star_coords.dim(), 0);
        for g in &f.generators {
            let p = substitute_all(std::slice::from_ref(&g.poly), &images).remove(0);
            out.push(p, g.provenance);
        }
        out.absorb_status(&f);
    }
    out.canonicalize();
    Ok(out)
}

fn check_injection(
    target: &GModule,
    source: &GModule,
    tau: &Mat,
    leaf: &str,
) -> Result<(), IdealError> {
    if tau.rows() != target.dim() || tau.cols() != source.dim() {
        return Err(IdealError::Invalid(format!(
            "map at '{leaf}' is {}x{}",
            tau.rows(),
            tau.cols()
        )));
    }
    if tau.rank() != tau.cols() {
        return Err(IdealError::Invalid(format!(
            "map at '{leaf}' is not injective"
        )));
    }
    for &g in source.group().generators() {
        if target.action(g).to_dense().mul(tau) != tau.mul(&source.action(g).to_dense()) {
            return Err(IdealError::Invalid(format!(
                "map at '{leaf}' is not equivariant"
            )));
        }
    }
    Ok(())
}

/// Pulls generators on the star `s` back to the star `s2` along
/// equivariant injections `tau[leaf]: V'_leaf -> V_leaf`.
pub fn pullback_star_ideal(
    s: &SpacedTree,
    generators: &GeneratorSet,
    s2: &SpacedTree,
    tau: &BTreeMap<String, Mat>,
) -> Result<GeneratorSet, IdealError> {
    if s.leaves() != s2.leaves() {
        return Err(IdealError::Invalid("stars have different leaves".into()));
    }
    let leaves = s2.leaves();
    let mut maps = Vec::new();
    for leaf in &leaves {
        let m = tau
            .get(leaf)
            .ok_or_else(|| IdealError::Invalid(format!("no map at '{leaf}'")))?;
        check_injection(s.module(leaf), s2.module(leaf), m, leaf)?;
        maps.push(m);
    }
    let source = tree_coordinates(s2);
    let target = tree_coordinates(s);
    let dims = s2.leaf_dims();
    let columns = transport_columns(&source, &target, |v| {
        super::linear::map_factors(&leaves, &dims, v, &maps)
    });
    let images = linear_forms(&columns, target.dim(), 0);
    let mut out = GeneratorSet::new(var_table(&source));
    out.extend(
        substitute_all(&generators.polys(), &images),
        Provenance::Pullback,
    );
    out.absorb_status(generators);
    out.canonicalize();
    Ok(out)
}

/// Labels `role[...]` for every coordinate of the leaf space.
pub fn full_coordinates(t: &SpacedTree, role: &str) -> VarTable {
    let modules = t.leaf_modules();
    let dims = t.leaf_dims();
    let n: usize = dims.iter().product();
    VarTable::from_labels((0..n).map(|i| {
        let idx = digits(i, &dims);
        Label::new(
            role,
            modules
                .iter()
                .zip(&idx)
                .map(|(m, &j)| m.labels()[j].clone())
                .collect(),
        )
    }))
    .expect("distinct labels")
}

/// Generators for the model of distributions `Phi_T(A, pi)` with an
/// arbitrary root distribution `pi` at the internal vertex `r`, in the
/// coordinates `p[...]` of the whole leaf space.
///
/// A point `w` of the leaf space is encoded by the equivariant map
/// `KG -> L(T)`, `g -> g w`; such maps are exactly the composites of the
/// model of the tree with an extra leaf at `r` and maps `KG -> V_r`.
pub fn root_extension_ideal(
    t: &SpacedTree,
    r: &str,
    provider: &StarIdealProvider,
) -> Result<GeneratorSet, IdealError> {
    let (extended, r2) = t.root_extend(r)?;
    let f = tree_ideal(&extended, provider)?;
    let leaves = t.leaves();
    let leaf_space = t.leaf_space();
    let dim_l = leaf_space.dim();
    let kg = GModule::regular(t.symmetry().clone());
    let order = kg.dim();
    let hb = HomBlocks::between(&kg, &leaf_space)?;
    let left = Split::of_tree(&extended, &leaves, &[r2])?;
    if left.blocks.row_shape() != hb.row_shape() {
        return Err(IdealError::Shape(
            "leaf-space multiplicities disagree".into(),
        ));
    }
    let l = left.blocks.col_shape().to_vec();
    let columns: Vec<Vec<Scalar>> = (0..dim_l)
        .map(|j| {
            let mut h = Matrix::zeros(dim_l, order);
            for g in 0..order {
                for (i, x) in leaf_space.action(g).column(j) {
                    h[(*i, g)] = x.clone();
                }
            }
            hb.flatten(&hb.blocks_of_map(&h))
        })
        .collect();
    let h_blocks = hb.unflatten(&linear_forms(&columns, hb.entry_count(), 0));
    let mut out = GeneratorSet::new(full_coordinates(t, "p"));
    out.extend(rank_minors(&h_blocks, &l), Provenance::Minor);
    let left_columns = left.coordinate_columns();
    let n1 = left.coords.dim();
    let contracted = contracted_ideal(
        &f.polys(),
        Side::Left,
        &h_blocks,
        &l,
        dim_l as u32,
        &|prod| coordinate_images(&left_columns, n1, prod),
    )?;
    out.extend(contracted, Provenance::Contracted);
    out.absorb_status(&f);
    out.canonicalize();
    Ok(out)
}

/// Re-expresses generators in the coordinates `p[...]` of the whole leaf
/// space and adds linear forms cutting out the invariant subspace.
pub fn with_linear_cuts(t: &SpacedTree, set: &GeneratorSet) -> GeneratorSet {
    let coords = tree_coordinates(t);
    let mut out = GeneratorSet::new(full_coordinates(t, "p"));
    let images: Vec<Poly> = coords
        .pivots()
        .iter()
        .map(|&p| Poly::var(p as u32))
        .collect();
    for g in &set.generators {
        out.push(
            substitute_all(std::slice::from_ref(&g.poly), &images).remove(0),
            g.provenance,
        );
    }
    // v_i = sum_k b_k[i] v[pivot_k] on the invariant subspace.
    let n = t.leaf_space_dim();
    let mut forms: Vec<Poly> = (0..n).map(|i| Poly::var(i as u32)).collect();
    for (b, &p) in coords.basis().iter().zip(coords.pivots()) {
        for (i, x) in b {
            forms[*i] = forms[*i].sub_ref(&Poly::var(p as u32).scale_by(x));
        }
    }
    out.extend(forms, Provenance::LinearCut);
    out.absorb_status(set);
    out.canonicalize();
    out
}
