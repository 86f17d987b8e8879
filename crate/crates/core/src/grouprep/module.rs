//! G-modules with invariant symmetric forms and optional distinguished bases.

use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::One;

use super::irreps::{check_table, inner_product, irreducible_representations, Irrep};
use super::{FiniteGroup, GroupError, Perm};
use crate::algebra::span::VectorSpan;
use crate::algebra::{Matrix, Ring, Scalar, SparseMatrix};
use crate::Mat;

/// A group together with a complete list of its irreducible representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Symmetry {
    group: FiniteGroup,
    irreps: Vec<Irrep>,
}

impl Symmetry {
    /// Uses the built-in irreducible representations.
    pub fn new(group: FiniteGroup) -> Result<Arc<Self>, GroupError> {
        let irreps = irreducible_representations(&group)?;
        Ok(Arc::new(Symmetry { group, irreps }))
    }

    /// Uses a caller-supplied table, which is validated.
    pub fn with_irreps(group: FiniteGroup, irreps: Vec<Irrep>) -> Result<Arc<Self>, GroupError> {
        check_table(&group, &irreps)?;
        Ok(Arc::new(Symmetry { group, irreps }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// A finite-dimensional G-module in explicit coordinates.
///
/// `form` is the Gram matrix of the invariant symmetric form. When based,
/// the columns of `basis` are the distinguished orthonormal basis vectors
/// written in the module's coordinates.
#[derive(Clone, Debug)]
pub struct GModule {
    sym: Arc<Symmetry>,
    labels: Vec<String>,
    action: Vec<SparseMatrix<Scalar>>,
    form: Mat,
    basis: Option<Mat>,
    basis_labels: Vec<String>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.sym, &other.sym) || self.sym == other.sym)
            && self.labels == other.labels
            && self.action == other.action
            && self.form == other.form
            && self.basis == other.basis
            && self.basis_labels == other.basis_labels
    }
}

/// Extends generator matrices to every group element.
fn extend_action(
    group: &FiniteGroup,
    gens: &[SparseMatrix<Scalar>],
    n: usize,
) -> Result<Vec<SparseMatrix<Scalar>>, GroupError> {
    if gens.len() != group.generators().len() {
        return Err(GroupError::Module(format!(
            "expected {} generator actions, got {}",
            group.generators().len(),
            gens.len()
        )));
    }
    if gens.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(GroupError::Module(format!(
            "generator actions must be {n} x {n}"
        )));
    }
    let mut out: Vec<Option<SparseMatrix<Scalar>>> = vec![None; group.order()];
    out[0] = Some(SparseMatrix::identity(n));
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for (k, &g) in group.generators().iter().enumerate() {
            let b = group.mul(a, g);
            let m = out[a].as_ref().unwrap().mul(&gens[k]);
            match &out[b] {
                None => {
                    out[b] = Some(m);
                    queue.push_back(b);
                }
                Some(old) if *old != m => {
                    return Err(GroupError::Module(
                        "action does not respect the group relations".into(),
                    ))
                }
                Some(_) => {}
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|m| m.expect("generators reach every element"))
        .collect())
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

impl GModule {
    /// Permutation module with the given images of the basis under each
    /// generator; the basis is distinguished and orthonormal.
    pub fn permutation(
        sym: Arc<Symmetry>,
        labels: Vec<String>,
        generator_images: &[Perm],
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        let gens: Vec<SparseMatrix<Scalar>> = generator_images
            .iter()
            .map(|p| SparseMatrix::permutation(&p.iter().map(|&x| x as usize).collect::<Vec<_>>()))
            .collect();
        for p in generator_images {
            if p.len() != n {
                return Err(GroupError::Module(format!(
                    "permutation {p:?} does not act on {n} labels"
                )));
            }
        }
        let action = extend_action(sym.group(), &gens, n)?;
        let m = GModule {
            basis_labels: labels.clone(),
            labels,
            action,
            form: Matrix::identity(n),
            basis: Some(Matrix::identity(n)),
            sym,
        };
        m.validate()?;
        Ok(m)
    }

    /// The permutation module on the group's own label set.
    pub fn natural(sym: Arc<Symmetry>) -> Self {
        let labels = sym.group().labels().to_vec();
        let images: Vec<Perm> = sym
            .group()
            .generators()
            .iter()
            .map(|&g| sym.group().element(g).to_vec())
            .collect();
        Self::permutation(sym, labels, &images).expect("natural module")
    }

    /// The regular module KG, with basis labelled by element index.
    pub fn regular(sym: Arc<Symmetry>) -> Self {
        let g = sym.group();
        let labels = (0..g.order()).map(|i| format!("g{i}")).collect();
        let images: Vec<Perm> = g
            .generators()
            .iter()
            .map(|&s| (0..g.order()).map(|h| g.mul(s, h) as u32).collect())
            .collect();
        Self::permutation(sym, labels, &images).expect("regular module")
    }

    /// Module given by generator matrices and a form. A distinguished
    /// basis, when given, is a matrix whose columns are the basis vectors.
    pub fn from_matrices(
        sym: Arc<Symmetry>,
        labels: Vec<String>,
        generator_matrices: &[Mat],
        form: Mat,
        basis: Option<(Mat, Vec<String>)>,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        let gens: Vec<SparseMatrix<Scalar>> = generator_matrices
            .iter()
            .map(SparseMatrix::from_dense)
            .collect();
        let action = extend_action(sym.group(), &gens, n)?;
        let (basis, basis_labels) = match basis {
            Some((b, l)) => (Some(b), l),
            None => (None, Vec::new()),
        };
        let m = GModule {
            sym,
            labels,
            action,
            form,
            basis,
            basis_labels,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks that the form is symmetric, non-degenerate and invariant, and
    /// that a distinguished basis is G-stable and orthonormal.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.dim();
        if self.form.rows() != n || !self.form.is_square() {
            return Err(GroupError::Module("form has the wrong size".into()));
        }
        if !self.form.is_symmetric() {
            return Err(GroupError::Module("form is not symmetric".into()));
        }
        if self.form.rank() != n {
            return Err(GroupError::Module("form is degenerate".into()));
        }
        for &g in self.sym.group().generators() {
            let a = self.action[g].to_dense();
            if a.transpose().mul(&self.form).mul(&a) != self.form {
                return Err(GroupError::Module("form is not invariant".into()));
            }
        }
        if let Some(b) = &self.basis {
            if b.rows() != n || b.cols() != n || self.basis_labels.len() != n {
                return Err(GroupError::Module("basis has the wrong size".into()));
            }
            if b.transpose().mul(&self.form).mul(b) != Matrix::identity(n) {
                return Err(GroupError::Module("basis is not orthonormal".into()));
            }
            for &g in self.sym.group().generators() {
                if self.basis_permutation(g).is_none() {
                    return Err(GroupError::Module(
                        "basis is not permuted by the group".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn symmetry(&self) -> &Arc<Symmetry> {
        &self.sym
    }

    pub fn group(&self) -> &FiniteGroup {
        self.sym.group()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coordinate labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn action(&self, g: usize) -> &SparseMatrix<Scalar> {
        &self.action[g]
    }

    pub fn form(&self) -> &Mat {
        &self.form
    }

    pub fn is_based(&self) -> bool {
        self.basis.is_some()
    }

    pub fn basis(&self) -> Option<&Mat> {
        self.basis.as_ref()
    }

    /// Names of the distinguished basis vectors (empty when not based).
    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// The permutation of the distinguished basis induced by `g`.
    pub fn basis_permutation(&self, g: usize) -> Option<Vec<usize>> {
        let b = self.basis.as_ref()?;
        let columns: Vec<Vec<Scalar>> = (0..b.cols()).map(|j| b.column(j)).collect();
        let mut image = Vec::with_capacity(columns.len());
        for c in &columns {
            let gc = self.action[g].apply(c);
            image.push(columns.iter().position(|d| *d == gc)?);
        }
        Some(image)
    }

    pub fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.action[g].apply(v)
    }

    /// `(u|v)` under the module's form.
    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let fv = self.form.mul_vec(v);
        let mut acc = Scalar::zero();
        for (a, b) in u.iter().zip(&fv) {
            acc.add_assign_ref(&a.mul_ref(b));
        }
        acc
    }

    /// Average of `v` over the listed elements.
    pub fn average(&self, elements: &[usize], v: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec![Scalar::zero(); v.len()];
        for &g in elements {
            for (a, b) in acc.iter_mut().zip(self.act(g, v)) {
                a.add_assign_ref(&b);
            }
        }
        let inv = Scalar::frac(1, elements.len() as i64);
        acc.iter().map(|x| x.mul_ref(&inv)).collect()
    }

    /// The Reynolds projection onto G-fixed vectors.
    pub fn reynolds(&self, v: &[Scalar]) -> Vec<Scalar> {
        let all: Vec<usize> = (0..self.sym.order()).collect();
        self.average(&all, v)
    }

    /// Basis of the vectors fixed by the subgroup with the given elements,
    /// in reduced echelon form.
    pub fn invariant_basis(&self, subgroup: &[usize]) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut span = VectorSpan::new(n);
        for i in 0..n {
            span.insert(&self.average(subgroup, &unit(n, i)));
        }
        span.basis()
    }

    pub fn character(&self) -> Vec<Scalar> {
        self.action.iter().map(|a| a.trace()).collect()
    }

    /// Multiplicity of each irreducible, in the order of the symmetry's table.
    pub fn multiplicities(&self) -> Result<Vec<usize>, GroupError> {
        let chi = self.character();
        let mut out = Vec::new();
        let mut total = 0;
        for r in self.sym.irreps() {
            let ip = inner_product(self.group(), &chi, r.character());
            let m = ip
                .as_rat()
                .filter(|q| q.is_integer() && !q.is_negative())
                .and_then(|q| q.numer().try_into().ok())
                .ok_or_else(|| GroupError::Irrep(format!("multiplicity of {} is {ip}", r.name)))?;
            total += m * r.dim();
            out.push(m);
        }
        if total != self.dim() {
            return Err(GroupError::Irrep(
                "irreducible table is incomplete for this module".into(),
            ));
        }
        Ok(out)
    }

    /// The same module in new coordinates `y`, where old = `p` * new.
    pub fn change_coordinates(&self, p: &Mat, labels: Vec<String>) -> Result<Self, GroupError> {
        let inv = p
            .inverse()
            .map_err(|_| GroupError::Module("coordinate change is singular".into()))?;
        let action = self
            .action
            .iter()
            .map(|a| SparseMatrix::from_dense(&inv.mul(&a.to_dense()).mul(p)))
            .collect();
        let form = p.transpose().mul(&self.form).mul(p);
        let basis = self.basis.as_ref().map(|b| inv.mul(b));
        let m = GModule {
            sym: self.sym.clone(),
            labels,
            action,
            form,
            basis,
            basis_labels: self.basis_labels.clone(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Re-expresses a based module of an abelian group in a basis of
    /// weight vectors built from orbits of the distinguished basis.
    ///
    /// The regular module of a group of order 2 gets labels `t`, `s` for
    /// the sum and difference of its basis vectors; modules on which the
    /// group acts trivially keep their labels; otherwise labels are `w0`,
    /// `w1`, ... Returns the module and the change-of-coordinates matrix.
    pub fn weight_coordinates(&self) -> Result<(Self, Mat), GroupError> {
        let group = self.group();
        if !group.is_abelian() {
            return Err(GroupError::Module(
                "weight coordinates need an abelian group".into(),
            ));
        }
        let b = self.basis.as_ref().ok_or_else(|| {
            GroupError::Module("weight coordinates need a distinguished basis".into())
        })?;
        let n = self.dim();
        let perms: Vec<Vec<usize>> = (0..group.order())
            .map(|g| self.basis_permutation(g).expect("validated basis"))
            .collect();
        let mut done = vec![false; n];
        let mut columns = Vec::new();
        let mut orbit_sizes = Vec::new();
        for j0 in 0..n {
            if done[j0] {
                continue;
            }
            let stab: Vec<usize> = (0..group.order()).filter(|&g| perms[g][j0] == j0).collect();
            for g in 0..group.order() {
                done[perms[g][j0]] = true;
            }
            orbit_sizes.push(group.order() / stab.len());
            for r in self.sym.irreps() {
                if stab.iter().any(|&h| !r.character()[h].is_one()) {
                    continue;
                }
                let mut v = vec![Scalar::zero(); n];
                for g in 0..group.order() {
                    let c = r.character()[group.inv(g)].clone();
                    let col = b.column(perms[g][j0]);
                    for (x, y) in v.iter_mut().zip(&col) {
                        x.add_assign_ref(&y.mul_ref(&c));
                    }
                }
                let scale = Scalar::frac(1, stab.len() as i64);
                columns.push(v.iter().map(|x| x.mul_ref(&scale)).collect::<Vec<_>>());
            }
        }
        let p = Matrix::from_columns(&columns, n);
        let labels: Vec<String> = if group.order() == 2 && n == 2 && orbit_sizes == [2] {
            vec!["t".into(), "s".into()]
        } else if orbit_sizes.iter().all(|&s| s == 1) {
            self.labels.clone()
        } else {
            (0..n).map(|k| format!("w{k}")).collect()
        };
        Ok((self.change_coordinates(&p, labels)?, p))
    }

    /// Tensor product with the first factor most significant. Coordinate
    /// labels are joined with commas.
    pub fn tensor(factors: &[&GModule]) -> Result<Self, GroupError> {
        let Some(first) = factors.first() else {
            return Err(GroupError::Module("empty tensor product".into()));
        };
        let mut m = (*first).clone();
        for f in &factors[1..] {
            if !(Arc::ptr_eq(&m.sym, &f.sym) || m.sym == f.sym) {
                return Err(GroupError::Module(
                    "tensor factors use different groups".into(),
                ));
            }
            let join = |a: &[String], b: &[String]| -> Vec<String> {
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| format!("{x},{y}")))
                    .collect()
            };
            let labels = join(&m.labels, &f.labels);
            let action = m
                .action
                .iter()
                .zip(&f.action)
                .map(|(a, b)| a.kron(b))
                .collect();
            let form = m.form.kron(&f.form);
            let (basis, basis_labels) = match (&m.basis, &f.basis) {
                (Some(a), Some(b)) => (Some(a.kron(b)), join(&m.basis_labels, &f.basis_labels)),
                _ => (None, Vec::new()),
            };
            m = GModule {
                sym: m.sym.clone(),
                labels,
                action,
                form,
                basis,
                basis_labels,
            };
        }
        Ok(m)
    }

    /// Drops the distinguished basis.
    pub fn unbased(&self) -> Self {
        GModule {
            basis: None,
            basis_labels: Vec::new(),
            ..self.clone()
        }
    }
}
