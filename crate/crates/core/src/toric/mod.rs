//! Monomial parametrizations of models of abelian groups whose internal
//! distinguished bases are single orbits, and the binomials they imply.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Label, Matrix, Monomial, Ring, VarTable};
use crate::grouprep::GroupError;
use crate::ideal::{tree_coordinates, var_table};
use crate::model::{psi, InvariantCoordinates, TreeRepresentation};
use crate::tree::{SpacedTree, TreeError};
use crate::{Poly, Scalar};

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("the group is not abelian")]
    NonAbelian,
    #[error("the distinguished basis at '{0}' is not a single orbit")]
    MultiOrbit(String),
    #[error("vertex '{0}' has no distinguished basis, so no weight coordinates")]
    NotBased(String),
    #[error("coordinate {coordinate} is not a monomial: {witness}")]
    NotMonomial { coordinate: String, witness: String },
    #[error("not a binomial: {0}")]
    NotBinomial(String),
    #[error("{needed} monomials exceed the budget of {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("the degree bound must be at least 1")]
    Degree,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Rows: invariant coordinates; columns: edge parameters. Coordinate `i`
/// equals `prefactors[i]` times the monomial with exponents `rows[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub rows: Vec<Vec<u32>>,
    pub prefactors: Vec<Scalar>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

#[derive(Serialize)]
struct Header<'a> {
    rows: &'a [String],
    columns: &'a [String],
    prefactors: Vec<String>,
}

impl ExponentMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    /// The exponent rows as comma-separated integers.
    pub fn to_csv(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
                    + "\n"
            })
            .collect()
    }

    /// Row and column labels and prefactors, as JSON.
    pub fn header_json(&self) -> String {
        let h = Header {
            rows: &self.row_labels,
            columns: &self.col_labels,
            prefactors: self.prefactors.iter().map(|p| p.to_string()).collect(),
        };
        serde_json::to_string_pretty(&h).expect("serializable")
    }

    /// Parameter exponents and prefactor of a monomial in the coordinates.
    fn image(&self, m: &Monomial) -> (Vec<u32>, Scalar) {
        let mut exps = vec![0u32; self.ncols()];
        let mut pref = Scalar::one();
        for &(v, e) in m.factors() {
            for (x, &r) in exps.iter_mut().zip(&self.rows[v as usize]) {
                *x += e * r;
            }
            pref = pref.mul_ref(&self.prefactors[v as usize].pow(e));
        }
        (exps, pref)
    }
}

/// Evidence that every invariant coordinate of the model is a scaled
/// monomial in edge parameters, in weight coordinates.
#[derive(Clone, Debug)]
pub struct Certificate {
    /// The tree re-expressed in weight coordinates.
    pub tree: SpacedTree,
    pub matrix: ExponentMatrix,
    /// For each parameter, its edge `(a, b)` with `a < b` and the invariant
    /// tensor it multiplies, as a `dim V_a x dim V_b` matrix.
    parameters: Vec<((String, String), crate::Mat)>,
}

impl Certificate {
    /// The representation of the weight tree with the given parameters.
    pub fn representation(&self, values: &[Scalar]) -> TreeRepresentation<Scalar> {
        let mut sums: BTreeMap<(String, String), crate::Mat> = BTreeMap::new();
        for ((edge, tensor), x) in self.parameters.iter().zip(values) {
            let entry = sums
                .entry(edge.clone())
                .or_insert_with(|| Matrix::zeros(tensor.rows(), tensor.cols()));
            *entry = entry.add(&tensor.map(|y| y.mul_ref(x)));
        }
        let mut a = TreeRepresentation::new();
        for ((p, q), m) in sums {
            a.insert(&p, &q, m);
        }
        a
    }

    /// The coordinates predicted by the certificate.
    pub fn predict(&self, values: &[Scalar]) -> Vec<Scalar> {
        let m = &self.matrix;
        m.rows
            .iter()
            .zip(&m.prefactors)
            .map(|(row, p)| {
                row.iter()
                    .zip(values)
                    .fold(p.clone(), |acc, (&e, x)| acc.mul_ref(&x.pow(e)))
            })
            .collect()
    }
}

/// Checks the hypotheses and returns the tree in weight coordinates.
fn weight_tree(t: &SpacedTree) -> Result<SpacedTree, ToricError> {
    let g = t.symmetry().group();
    if !g.is_abelian() {
        return Err(ToricError::NonAbelian);
    }
    for q in t.internal() {
        let m = t.module(&q);
        let orbit: std::collections::BTreeSet<usize> = (0..g.order())
            .filter_map(|h| m.basis_permutation(h).map(|p| p[0]))
            .collect();
        if orbit.len() != m.dim() {
            return Err(ToricError::MultiOrbit(q));
        }
    }
    for v in t.vertices() {
        if !t.module(v).is_based() {
            return Err(ToricError::NotBased(v.clone()));
        }
    }
    Ok(t.map_modules(|v, m| {
        m.weight_coordinates()
            .map(|(w, _)| w)
            .map_err(|e| TreeError::Module(v.to_string(), e))
    })?)
}

/// Certifies that, in weight coordinates, each invariant coordinate of
/// `Psi_T` with symbolic equivariant edge tensors is a scaled monomial.
pub fn monomial_certificate(t: &SpacedTree) -> Result<Certificate, ToricError> {
    let w = weight_tree(t)?;
    let mut parameters = Vec::new();
    let mut col_labels = Vec::new();
    for (a, b) in w.edges() {
        let (ma, mb) = (w.module(&a), w.module(&b));
        let inv = InvariantCoordinates::new("a", &[ma, mb]);
        for (vec, label) in inv.basis().iter().zip(inv.labels()) {
            let mut m = Matrix::zeros(ma.dim(), mb.dim());
            for (i, x) in vec {
                m[(i / mb.dim(), i % mb.dim())] = x.clone();
            }
            parameters.push(((a.clone(), b.clone()), m));
            let mut index = vec![a.clone(), b.clone()];
            index.extend(label.index.iter().cloned());
            col_labels.push(Label::new("a", index));
        }
    }
    let mut symbolic: BTreeMap<(String, String), Matrix<Poly>> = BTreeMap::new();
    for (k, (edge, tensor)) in parameters.iter().enumerate() {
        let var = Poly::var(k as u32);
        let entry = symbolic
            .entry(edge.clone())
            .or_insert_with(|| Matrix::zeros(tensor.rows(), tensor.cols()));
        *entry = entry.add(&tensor.map(|y| var.scale_by(y)));
    }
    let mut a = TreeRepresentation::new();
    for ((p, q), m) in symbolic {
        a.insert(&p, &q, m);
    }
    let coords = tree_coordinates(&w);
    let values = coords.coords(psi(&w, &a).data());
    let mut rows = Vec::new();
    let mut prefactors = Vec::new();
    for (value, label) in values.iter().zip(coords.labels()) {
        let mut row = vec![0u32; parameters.len()];
        match value.len() {
            0 => prefactors.push(Scalar::zero()),
            1 => {
                let (m, c) = value.terms().next().expect("one term");
                for &(v, e) in m.factors() {
                    row[v as usize] = e;
                }
                prefactors.push(c.clone());
            }
            _ => {
                let params =
                    VarTable::from_labels(col_labels.iter().cloned()).expect("distinct parameters");
                return Err(ToricError::NotMonomial {
                    coordinate: label.to_string(),
                    witness: value.display(&params),
                });
            }
        }
        rows.push(row);
    }
    let matrix = ExponentMatrix {
        rows,
        prefactors,
        row_labels: coords.labels().iter().map(|l| l.to_string()).collect(),
        col_labels: col_labels.iter().map(|l| l.to_string()).collect(),
    };
    Ok(Certificate {
        tree: w,
        matrix,
        parameters,
    })
}

/// Whether the binomial `b` in the coordinates vanishes on the
/// parametrization: both monomials map to the same parameter monomial and
/// the coefficients cancel after the prefactors.
pub fn binomial_check(b: &Poly, e: &ExponentMatrix) -> Result<bool, ToricError> {
    let terms: Vec<(&Monomial, &Scalar)> = b.terms().collect();
    if terms.len() != 2 {
        return Err(ToricError::NotBinomial(format!("{} terms", terms.len())));
    }
    if terms
        .iter()
        .any(|(m, _)| m.factors().iter().any(|&(v, _)| v as usize >= e.nrows()))
    {
        return Err(ToricError::NotBinomial("unknown coordinate".into()));
    }
    let (x1, p1) = e.image(terms[0].0);
    let (x2, p2) = e.image(terms[1].0);
    Ok(x1 == x2
        && terms[0]
            .1
            .mul_ref(&p1)
            .add_ref(&terms[1].1.mul_ref(&p2))
            .is_zero())
}

/// Every binomial of degree at most `d` vanishing on the parametrization,
/// found by grouping all monomials by their parameter image. Coordinates
/// with a zero prefactor are skipped.
pub fn lattice_relations_up_to_degree(
    e: &ExponentMatrix,
    d: u32,
    budget: usize,
) -> Result<Vec<Poly>, ToricError> {
    if d == 0 {
        return Err(ToricError::Degree);
    }
    let live: Vec<u32> = (0..e.nrows() as u32)
        .filter(|&v| !e.prefactors[v as usize].is_zero())
        .collect();
    let needed = monomial_count(live.len(), d);
    if needed > budget {
        return Err(ToricError::Budget { needed, budget });
    }
    let mut groups: BTreeMap<Vec<u32>, Vec<(Monomial, Scalar)>> = BTreeMap::new();
    let mut stack: Vec<(usize, Monomial)> = vec![(0, Monomial::one())];
    while let Some((start, m)) = stack.pop() {
        if !m.is_one() {
            let (x, p) = e.image(&m);
            groups.entry(x).or_default().push((m.clone(), p));
        }
        if m.degree() < d {
            for (k, &v) in live.iter().enumerate().skip(start) {
                stack.push((k, m.mul(&Monomial::var(v))));
            }
        }
    }
    let mut out = Vec::new();
    for members in groups.values() {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (m1, p1) = &members[i];
                let (m2, p2) = &members[j];
                let b = Poly::monomial(m1.clone(), p2.clone())
                    .sub_ref(&Poly::monomial(m2.clone(), p1.clone()));
                out.push(b);
            }
        }
    }
    Ok(crate::algebra::polynomial::canonicalize(out))
}

/// Monomials of degree `1..=d` in `n` variables.
fn monomial_count(n: usize, d: u32) -> usize {
    // C(n + d, d) - 1, saturating.
    let mut c: u128 = 1;
    for k in 1..=d as u128 {
        c = c * (n as u128 + k) / k;
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    (c - 1) as usize
}

/// The coordinate variables of the tree the certificate was computed on.
pub fn certificate_vars(c: &Certificate) -> VarTable {
    var_table(&tree_coordinates(&c.tree))
}
