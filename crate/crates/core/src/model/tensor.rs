//! Dense tensors over a list of named factors.

use num_traits::Zero;

use crate::algebra::{Ring, Scale};
use crate::{Mat, Scalar};

/// A tensor in `V_1 (x) ... (x) V_n`, stored row-major with the first
/// factor most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafTensor<E> {
    factors: Vec<String>,
    dims: Vec<usize>,
    data: Vec<E>,
}

/// Mixed-radix digits of `index`, first digit most significant.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

impl<E: Ring> LeafTensor<E> {
    pub fn new(factors: Vec<String>, dims: Vec<usize>, data: Vec<E>) -> Self {
        assert_eq!(factors.len(), dims.len());
        assert_eq!(data.len(), dims.iter().product::<usize>());
        LeafTensor {
            factors,
            dims,
            data,
        }
    }

    pub fn zeros(factors: Vec<String>, dims: Vec<usize>) -> Self {
        let n = dims.iter().product();
        LeafTensor {
            factors,
            dims,
            data: vec![E::zero(); n],
        }
    }

    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn position(&self, name: &str) -> usize {
        self.factors
            .iter()
            .position(|f| f == name)
            .unwrap_or_else(|| panic!("no factor named {name}"))
    }

    /// The same tensor with factors reordered to `order`.
    pub fn permuted(&self, order: &[String]) -> Self {
        if order == self.factors.as_slice() {
            return self.clone();
        }
        assert_eq!(order.len(), self.factors.len());
        let src: Vec<usize> = order.iter().map(|n| self.position(n)).collect();
        let old_strides = strides(&self.dims);
        let dims: Vec<usize> = src.iter().map(|&k| self.dims[k]).collect();
        let step: Vec<usize> = src.iter().map(|&k| old_strides[k]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut counter = vec![0usize; dims.len()];
        let mut offset = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[offset].clone());
            for k in (0..dims.len()).rev() {
                counter[k] += 1;
                offset += step[k];
                if counter[k] < dims[k] {
                    break;
                }
                offset -= step[k] * dims[k];
                counter[k] = 0;
            }
        }
        LeafTensor {
            factors: order.to_vec(),
            dims,
            data,
        }
    }

    /// Reads the tensor as a matrix: rows indexed by the leading factors up
    /// to `split`, columns by the rest.
    pub fn matrix_shape(&self, split: usize) -> (usize, usize) {
        let r: usize = self.dims[..split].iter().product();
        (r, self.data.len() / r.max(1))
    }

    /// Applies `m` (rows: new dimension) to the named factor.
    pub fn map_factor(&self, name: &str, m: &Mat) -> Self
    where
        E: Scale<Scalar>,
    {
        let k = self.position(name);
        let d = self.dims[k];
        assert_eq!(m.cols(), d);
        let inner: usize = self.dims[k + 1..].iter().product();
        let outer: usize = self.dims[..k].iter().product();
        let nd = m.rows();
        let mut data = vec![E::zero(); outer * nd * inner];
        for o in 0..outer {
            for j in 0..d {
                for n in 0..inner {
                    let x = &self.data[(o * d + j) * inner + n];
                    if x.is_zero() {
                        continue;
                    }
                    for i in 0..nd {
                        let c = &m[(i, j)];
                        if !c.is_zero() {
                            data[(o * nd + i) * inner + n].add_assign_ref(&x.scale(c));
                        }
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims[k] = nd;
        LeafTensor {
            factors: self.factors.clone(),
            dims,
            data,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.factors, other.factors);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        LeafTensor {
            factors: self.factors.clone(),
            dims: self.dims.clone(),
            data,
        }
    }

    pub fn map<F: Ring>(&self, f: impl Fn(&E) -> F) -> LeafTensor<F> {
        LeafTensor {
            factors: self.factors.clone(),
            dims: self.dims.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// `a (x) b` of flat vectors, `a` most significant.
pub fn kron_vec<E: Ring>(a: &[E], b: &[E]) -> Vec<E> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        if x.is_zero() {
            out.extend(std::iter::repeat_n(E::zero(), b.len()));
            continue;
        }
        for y in b {
            out.push(x.mul_ref(y));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Matrix;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn permutation_round_trip() {
        let data: Vec<Scalar> = (0..24).map(Scalar::int).collect();
        let t = LeafTensor::new(names(&["a", "b", "c"]), vec![2, 3, 4], data);
        let p = t.permuted(&names(&["c", "a", "b"]));
        assert_eq!(p.dims(), &[4, 2, 3]);
        // Entry (a=1, b=2, c=3) sits at 1*12 + 2*4 + 3 = 23.
        assert_eq!(p.data()[3 * 6 + 1 * 3 + 2], Scalar::int(23));
        assert_eq!(p.permuted(&names(&["a", "b", "c"])), t);
    }

    #[test]
    fn factor_maps() {
        let t = LeafTensor::new(
            names(&["a", "b"]),
            vec![2, 2],
            vec![1, 2, 3, 4].into_iter().map(Scalar::int).collect(),
        );
        let swap = Matrix::from_fn(2, 2, |i, j| {
            if i != j {
                Scalar::int(1)
            } else {
                Scalar::int(0)
            }
        });
        let s = t.map_factor("b", &swap);
        assert_eq!(s.data(), &[2, 1, 4, 3].map(Scalar::int));
        assert_eq!(digits(5, &[2, 3]), vec![1, 2]);
    }
}
