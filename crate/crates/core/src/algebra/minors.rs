//! Minors of matrices with polynomial entries.

use super::{Matrix, Polynomial, Ring};

/// All r-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..r).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] < n - r + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant by Laplace expansion along the first row.
pub fn determinant<F: Ring>(
    m: &Matrix<Polynomial<F>>,
    rows: &[usize],
    cols: &[usize],
) -> Polynomial<F> {
    match rows.len() {
        0 => Polynomial::constant(F::one()),
        1 => m[(rows[0], cols[0])].clone(),
        2 => m[(rows[0], cols[0])]
            .mul_ref(&m[(rows[1], cols[1])])
            .sub_ref(&m[(rows[0], cols[1])].mul_ref(&m[(rows[1], cols[0])])),
        _ => {
            let mut acc = Polynomial::zero();
            for (k, &c) in cols.iter().enumerate() {
                let entry = &m[(rows[0], c)];
                if entry.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let t = entry.mul_ref(&determinant(m, &rows[1..], &rest));
                if k % 2 == 0 {
                    acc.add_assign_poly(&t);
                } else {
                    acc = acc.sub_ref(&t);
                }
            }
            acc
        }
    }
}

/// All r x r minors, ordered by row subset and then column subset. Empty
/// when r exceeds either dimension or r = 0.
pub fn symbolic_minors<F: Ring>(m: &Matrix<Polynomial<F>>, r: usize) -> Vec<Polynomial<F>> {
    if r == 0 || r > m.rows().min(m.cols()) {
        return Vec::new();
    }
    let rs = subsets(m.rows(), r);
    let cs = subsets(m.cols(), r);
    let mut out = Vec::with_capacity(rs.len() * cs.len());
    for rows in &rs {
        for cols in &cs {
            out.push(determinant(m, rows, cols));
        }
    }
    out
}
