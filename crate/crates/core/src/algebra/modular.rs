//! Modular linear algebra with rational reconstruction.
//!
//! Kernels of rational matrices are computed modulo a sequence of word-size
//! primes, lifted by the Chinese remainder theorem, reconstructed as
//! rationals, and then checked exactly against the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Field, Matrix, Rational, Ring, Scalar};

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime. Returns 0 for a = 0.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^31 in decreasing order, so that products of two residues
/// fit in a `u64`.
#[derive(Debug, Clone)]
pub struct Primes {
    next: u64,
}

impl Default for Primes {
    fn default() -> Self {
        Primes {
            next: (1u64 << 31) - 1,
        }
    }
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 2 {
            let c = self.next;
            self.next -= 1;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// In-place Gauss-Jordan elimination modulo `p < 2^32`. Rows beyond the rank
/// are dropped; returns the pivot columns.
pub fn rref_mod(rows: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r][c..].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = p - row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = (*x + f * y) % p;
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a rational matrix modulo `p`, or `None` if some entry has a
/// denominator divisible by `p`.
pub fn rank_mod(rows: &[Vec<Rational>], ncols: usize, p: u64) -> Option<usize> {
    let mut m = reduce_rows(rows, p)?;
    Some(rref_mod(&mut m, ncols, p).len())
}

fn reduce_rows(rows: &[Vec<Rational>], p: u64) -> Option<Vec<Vec<u64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.mod_prime(p)).collect())
        .collect()
}

/// Smallest-height rational congruent to `a` modulo `m`, with numerator and
/// denominator bounded by sqrt(m/2).
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() {
        return None;
    }
    Rational::from_bigints(r1, t1).ok()
}

/// Right kernel of a matrix given by rows, as vectors in the normalized form
/// of [`Matrix::kernel`] (a 1 in each free column, increasing).
///
/// Rational inputs go through the modular path; inputs with cyclotomic
/// entries fall back to exact elimination.
pub fn kernel(rows: &[Vec<Scalar>], ncols: usize) -> Result<Vec<Vec<Scalar>>, AlgebraError> {
    if rows.is_empty() {
        return Ok(unit_vectors(ncols));
    }
    let rational: Option<Vec<Vec<Rational>>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.as_rat().cloned()).collect())
        .collect();
    let Some(q) = rational else {
        return Ok(Matrix::from_rows(rows.to_vec())?.kernel());
    };
    // Tall matrices: solve on rows independent modulo a prime, then check
    // the result against every row.
    if let Some(selected) = Primes::default()
        .take(8)
        .find_map(|p| independent_rows_mod(&q, ncols, p))
    {
        if selected.len() < q.len() {
            let sub: Vec<Vec<Rational>> = selected.iter().map(|&i| q[i].clone()).collect();
            let k = rational_kernel_of(&sub, ncols)?;
            if verify_kernel(&q, &k) {
                return Ok(k
                    .into_iter()
                    .map(|v| v.into_iter().map(Scalar::from).collect())
                    .collect());
            }
        }
    }
    let k = rational_kernel_of(&q, ncols)?;
    Ok(k.into_iter()
        .map(|v| v.into_iter().map(Scalar::from).collect())
        .collect())
}

fn rational_kernel_of(
    rows: &[Vec<Rational>],
    ncols: usize,
) -> Result<Vec<Vec<Rational>>, AlgebraError> {
    if rows.is_empty() {
        return Ok(unit_vectors(ncols));
    }
    if ncols > 24 {
        kernel_rational(rows, ncols)
    } else {
        Ok(Matrix::from_rows(rows.to_vec())?.kernel())
    }
}

/// Indices of a maximal set of rows independent modulo `p`, or `None` if
/// some entry has a denominator divisible by `p`.
pub fn independent_rows_mod(rows: &[Vec<Rational>], ncols: usize, p: u64) -> Option<Vec<usize>> {
    // Reduced rows with their leading columns.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if basis.len() == ncols {
            break;
        }
        let mut r: Vec<u64> = row.iter().map(|x| x.mod_prime(p)).collect::<Option<_>>()?;
        for (c, b) in &basis {
            if r[*c] != 0 {
                let f = p - r[*c];
                for (x, &y) in r.iter_mut().zip(b) {
                    if y != 0 {
                        *x = (*x + f * y) % p;
                    }
                }
            }
        }
        if let Some(c) = r.iter().position(|&x| x != 0) {
            let inv = inv_mod(r[c], p);
            for x in r.iter_mut() {
                *x = *x * inv % p;
            }
            basis.push((c, r));
            out.push(i);
        }
    }
    Some(out)
}

fn unit_vectors<F: Ring>(n: usize) -> Vec<Vec<F>> {
    (0..n)
        .map(|i| {
            let mut v = vec![F::zero(); n];
            v[i] = F::one();
            v
        })
        .collect()
}

/// Modular kernel of a rational matrix, checked exactly.
pub fn kernel_rational(
    rows: &[Vec<Rational>],
    ncols: usize,
) -> Result<Vec<Vec<Rational>>, AlgebraError> {
    let mut primes = Primes::default();
    // Residues of the reduced entries at (pivot row, free column).
    let mut pivots: Option<Vec<usize>> = None;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<Rational>> = None;
    for _round in 0..400 {
        let p = primes
            .next()
            .ok_or_else(|| AlgebraError::Reconstruction("ran out of primes".into()))?;
        let Some(mut m) = reduce_rows(rows, p) else {
            continue;
        };
        let piv = rref_mod(&mut m, ncols, p);
        match &pivots {
            Some(old) if old.len() > piv.len() || (old.len() == piv.len() && *old != piv) => {
                continue
            }
            Some(old) if old.len() == piv.len() => {}
            _ => {
                // First prime, or a prime of higher rank: earlier primes were unlucky.
                pivots = Some(piv.clone());
                acc.clear();
                modulus = BigInt::one();
                previous = None;
            }
        }
        let free = free_columns(&piv, ncols);
        let residues: Vec<u64> = (0..piv.len())
            .flat_map(|i| free.iter().map(move |&f| (i, f)))
            .map(|(i, f)| m[i][f])
            .collect();
        if acc.is_empty() {
            acc = residues.iter().map(|&r| BigInt::from(r)).collect();
            modulus = BigInt::from(p);
        } else {
            let pm = BigInt::from(p);
            let inv = inv_mod((&modulus % &pm).to_u64().unwrap(), p);
            for (a, &r) in acc.iter_mut().zip(&residues) {
                let a_mod = (&*a % &pm).to_u64().unwrap();
                let t = mul_mod((r + p - a_mod) % p, inv, p);
                *a += &modulus * BigInt::from(t);
            }
            modulus *= pm;
        }
        let recon: Option<Vec<Rational>> = acc
            .iter()
            .map(|a| rational_reconstruct(a, &modulus))
            .collect();
        let Some(recon) = recon else { continue };
        if previous.as_ref() != Some(&recon) {
            previous = Some(recon);
            continue;
        }
        let piv = pivots.clone().unwrap();
        let basis = assemble_kernel(&piv, &free, ncols, &recon);
        if verify_kernel(rows, &basis) {
            return Ok(basis);
        }
        previous = Some(recon);
    }
    Err(AlgebraError::Reconstruction(
        "kernel did not stabilise".into(),
    ))
}

fn free_columns(pivots: &[usize], ncols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..ncols).filter(|&c| !is_pivot[c]).collect()
}

fn assemble_kernel(
    pivots: &[usize],
    free: &[usize],
    ncols: usize,
    entries: &[Rational],
) -> Vec<Vec<Rational>> {
    free.iter()
        .enumerate()
        .map(|(j, &f)| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -entries[i * free.len() + j].clone();
            }
            v
        })
        .collect()
}

/// Exact check that every basis vector is annihilated by every row.
fn verify_kernel(rows: &[Vec<Rational>], basis: &[Vec<Rational>]) -> bool {
    basis.iter().all(|v| {
        let support: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        rows.iter().all(|row| {
            let mut acc = Rational::zero();
            for &i in &support {
                if !row[i].is_zero() {
                    acc += &(&row[i] * &v[i]);
                }
            }
            acc.is_zero()
        })
    })
}

/// Exact rank through the field trait, used as an oracle for the modular rank.
pub fn rank_exact<F: Field>(rows: &[Vec<F>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(rows.to_vec())
        .map(|m| m.rank())
        .unwrap_or(0)
}
