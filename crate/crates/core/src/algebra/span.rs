//! Linear spans of polynomials in reduced echelon form.
//!
//! Basis elements are monic, have pairwise distinct leading monomials, and no
//! basis element contains another element's leading monomial. This basis is
//! unique, so two spans are equal exactly when their bases are equal.

use std::collections::BTreeMap;

use super::{Field, Monomial, Polynomial, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSpan<F: Ring> {
    basis: BTreeMap<Monomial, Polynomial<F>>,
}

impl<F: Field> Default for LinearSpan<F> {
    fn default() -> Self {
        LinearSpan {
            basis: BTreeMap::new(),
        }
    }
}

impl<F: Field> LinearSpan<F> {
    pub fn new<'a>(polys: impl IntoIterator<Item = &'a Polynomial<F>>) -> Self
    where
        F: 'a,
    {
        let mut s = Self::default();
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Remainder of `p` after reduction by the basis.
    pub fn reduce(&self, p: &Polynomial<F>) -> Polynomial<F> {
        let mut r = p.clone();
        let hits: Vec<(Monomial, F)> = p
            .terms()
            .filter(|(m, _)| self.basis.contains_key(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in hits {
            r = r.sub_ref(&self.basis[&m].scale_by(&c));
        }
        r
    }

    pub fn contains(&self, p: &Polynomial<F>) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, p: &Polynomial<F>) -> bool {
        let r = self.reduce(p);
        if r.is_zero() {
            return false;
        }
        let q = r.monic();
        let lead = q.leading().expect("nonzero").0.clone();
        for b in self.basis.values_mut() {
            let c = b.coefficient(&lead);
            if !c.is_zero() {
                *b = b.sub_ref(&q.scale_by(&c));
            }
        }
        self.basis.insert(lead, q);
        true
    }

    /// Basis in decreasing order of leading monomial.
    pub fn basis(&self) -> Vec<Polynomial<F>> {
        self.basis.values().rev().cloned().collect()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.values().all(|b| other.contains(b))
    }

    /// Intersection with the polynomials of degree exactly `d` whose terms
    /// all have degree `d`; valid for spans of homogeneous polynomials.
    pub fn degree_part(&self, d: u32) -> Self {
        let mut s = Self::default();
        for b in self.basis.values() {
            if b.is_homogeneous() && b.degree() == d {
                s.insert(b);
            }
        }
        s
    }
}

/// Span of dense vectors, kept as a reduced row echelon basis keyed by
/// pivot column.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorSpan<F> {
    len: usize,
    rows: BTreeMap<usize, Vec<F>>,
}

impl<F: Field> VectorSpan<F> {
    pub fn new(len: usize) -> Self {
        VectorSpan {
            len,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.len);
        let mut r = v.to_vec();
        for (&p, row) in &self.rows {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    x.sub_assign_ref(&y.mul_ref(&c));
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].try_inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = x.mul_ref(&inv);
        }
        for row in self.rows.values_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    x.sub_assign_ref(&y.mul_ref(&c));
                }
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Basis rows in increasing pivot order.
    pub fn basis(&self) -> Vec<Vec<F>> {
        self.rows.values().cloned().collect()
    }
}

/// Span of sparse vectors (sorted `(index, value)` lists), kept fully
/// reduced so that each basis row vanishes at every other row's pivot.
#[derive(Clone, Debug, Default)]
pub struct SparseSpan<F> {
    rows: BTreeMap<usize, Vec<(usize, F)>>,
}

fn axpy<F: Field>(v: &[(usize, F)], c: &F, row: &[(usize, F)]) -> Vec<(usize, F)> {
    // v - c * row, merged by index.
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < row.len() {
        let take_v = j >= row.len() || (i < v.len() && v[i].0 < row[j].0);
        let take_r = i >= v.len() || (j < row.len() && row[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_r {
            out.push((row[j].0, -row[j].1.mul_ref(c)));
            j += 1;
        } else {
            let x = v[i].1.sub_ref(&row[j].1.mul_ref(c));
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> SparseSpan<F> {
    pub fn new() -> Self {
        SparseSpan {
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[(usize, F)]) -> Vec<(usize, F)> {
        let mut r: Vec<(usize, F)> = v.iter().filter(|e| !e.1.is_zero()).cloned().collect();
        let hits: Vec<(usize, F)> = r
            .iter()
            .filter(|e| self.rows.contains_key(&e.0))
            .cloned()
            .collect();
        for (p, c) in hits {
            r = axpy(&r, &c, &self.rows[&p]);
        }
        r
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[(usize, F)]) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.try_inv().expect("nonzero pivot");
        let r: Vec<(usize, F)> = r.into_iter().map(|(i, x)| (i, x.mul_ref(&inv))).collect();
        for row in self.rows.values_mut() {
            if let Ok(k) = row.binary_search_by_key(&p, |e| e.0) {
                let c = row[k].1.clone();
                *row = axpy(row, &c, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Basis rows in increasing pivot order.
    pub fn basis(&self) -> Vec<Vec<(usize, F)>> {
        self.rows.values().cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    type P = Polynomial<Rational>;

    #[test]
    fn spans_are_canonical() {
        let (x, y, z) = (P::var(0), P::var(1), P::var(2));
        let a = LinearSpan::new([&(x.clone() + y.clone()), &(y.clone() - z.clone())]);
        let b = LinearSpan::new([
            &(x.clone() + z.clone()),
            &(x.clone() + y.clone() + y.clone() - z.clone()),
        ]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&(x.clone() + z.clone())));
        assert!(!a.contains(&x));
    }

    #[test]
    fn redundant_inserts_do_not_grow() {
        let (x, y) = (P::var(0), P::var(1));
        let mut s = LinearSpan::new([&x]);
        assert!(!s.insert(&x.scale_by(&Rational::from_integer(5))));
        assert!(s.insert(&y));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn vector_span_is_reduced() {
        let q = |v: &[i64]| {
            v.iter()
                .map(|&x| Rational::from_integer(x))
                .collect::<Vec<_>>()
        };
        let mut s = VectorSpan::new(3);
        assert!(s.insert(&q(&[1, 2, 3])));
        assert!(s.insert(&q(&[0, 1, 1])));
        assert!(!s.insert(&q(&[2, 5, 7])));
        assert_eq!(s.basis(), vec![q(&[1, 0, 1]), q(&[0, 1, 1])]);
        assert_eq!(s.pivots(), vec![0, 1]);
    }

    #[test]
    fn sparse_span_matches_dense_span() {
        let q = |x: i64| Rational::from_integer(x);
        let vs: Vec<Vec<(usize, Rational)>> = vec![
            vec![(1, q(2)), (4, q(1))],
            vec![(0, q(1)), (1, q(1))],
            vec![(0, q(2)), (1, q(4)), (4, q(1))],
            vec![(3, q(5))],
        ];
        let mut sparse = SparseSpan::new();
        let mut dense = VectorSpan::new(5);
        for v in &vs {
            let mut d = vec![q(0); 5];
            for (i, x) in v {
                d[*i] = x.clone();
            }
            assert_eq!(sparse.insert(v), dense.insert(&d));
        }
        assert_eq!(sparse.pivots(), dense.pivots());
        for (s, d) in sparse.basis().iter().zip(dense.basis()) {
            let mut full = vec![q(0); 5];
            for (i, x) in s {
                full[*i] = x.clone();
            }
            assert_eq!(full, d);
        }
    }
}
