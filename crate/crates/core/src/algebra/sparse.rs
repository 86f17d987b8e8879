//! Column-sparse matrices, used for group actions on large tensor products.

use super::{Matrix, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    /// `columns[j]` lists the nonzero `(row, value)` pairs of column j,
    /// sorted by row.
    columns: Vec<Vec<(usize, F)>>,
}

impl<F: Ring> SparseMatrix<F> {
    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            columns: (0..n).map(|i| vec![(i, F::one())]).collect(),
        }
    }

    /// Permutation matrix sending basis vector j to basis vector `image[j]`.
    pub fn permutation(image: &[usize]) -> Self {
        SparseMatrix {
            rows: image.len(),
            columns: image.iter().map(|&i| vec![(i, F::one())]).collect(),
        }
    }

    pub fn from_dense(m: &Matrix<F>) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: m.rows(),
            columns,
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, F)>>) -> Self {
        let columns = columns
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|e| e.0);
                c.retain(|e| !e.1.is_zero());
                c
            })
            .collect();
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, F)] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> Matrix<F> {
        let mut m = Matrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    /// Dense matrix-vector product.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![F::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, a) in col {
                out[*i].add_assign_ref(&a.mul_ref(&v[j]));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols(), other.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: std::collections::BTreeMap<usize, F> =
                    std::collections::BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        acc.entry(*i)
                            .or_insert_with(F::zero)
                            .add_assign_ref(&a.mul_ref(b));
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            columns,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                columns[*i].push((j, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols(),
            columns,
        }
    }

    /// Kronecker product `self (x) other`, with the first factor most
    /// significant in the row and column indices.
    pub fn kron(&self, other: &Self) -> Self {
        let mut columns = Vec::with_capacity(self.cols() * other.cols());
        for a_col in &self.columns {
            for b_col in &other.columns {
                let mut col = Vec::with_capacity(a_col.len() * b_col.len());
                for (i, a) in a_col {
                    for (k, b) in b_col {
                        col.push((i * other.rows + k, a.mul_ref(b)));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix {
            rows: self.rows * other.rows,
            columns,
        }
    }

    /// The permutation this matrix represents, if it is a permutation matrix.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols() {
            return None;
        }
        let mut seen = vec![false; self.rows];
        let mut image = Vec::with_capacity(self.rows);
        for col in &self.columns {
            match col.as_slice() {
                [(i, v)] if v.is_one() && !seen[*i] => {
                    seen[*i] = true;
                    image.push(*i);
                }
                _ => return None,
            }
        }
        Some(image)
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for (j, col) in self.columns.iter().enumerate() {
            if let Ok(k) = col.binary_search_by_key(&j, |e| e.0) {
                acc.add_assign_ref(&col[k].1);
            }
        }
        acc
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    #[test]
    fn kron_of_permutations_is_a_permutation() {
        let a = SparseMatrix::<Rational>::permutation(&[1, 0]);
        let b = SparseMatrix::<Rational>::permutation(&[0, 2, 1]);
        let k = a.kron(&b);
        assert_eq!(k.as_permutation().unwrap(), vec![3, 5, 4, 0, 2, 1]);
        assert_eq!(k.to_dense(), a.to_dense().kron(&b.to_dense()));
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::<Rational>::permutation(&[2, 0, 1]);
        let b = SparseMatrix::<Rational>::permutation(&[1, 2, 0]);
        assert_eq!(a.mul(&b).to_dense(), a.to_dense().mul(&b.to_dense()));
        assert_eq!(a.mul(&b).as_permutation().unwrap(), vec![0, 1, 2]);
        assert_eq!(a.transpose().mul(&a), SparseMatrix::identity(3));
    }
}
