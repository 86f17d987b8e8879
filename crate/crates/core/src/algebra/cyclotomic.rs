//! Scalars in cyclotomic fields.
//!
//! A [`Scalar`] is either a plain rational or an element of Q(zeta_n) stored
//! in the power basis `1, zeta, ..., zeta^(phi(n)-1)` and kept reduced modulo
//! the n-th cyclotomic polynomial. Values that happen to be rational are
//! always stored as [`Scalar::Rat`]. Operands over different fields are
//! promoted to the field of the lcm of their orders.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{AlgebraError, Field, Rational, Ring};

#[derive(Clone)]
pub enum Scalar {
    Rat(Rational),
    Cyc {
        order: u32,
        coeffs: Arc<Vec<Rational>>,
    },
}

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_polynomial(d);
            num = divide_exact(&num, &den);
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().write().unwrap().insert(n, p.clone());
    p
}

fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = num.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn] / den[dn];
        q[i] = c;
        for j in 0..=dn {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn reduce_mod_cyclotomic(mut v: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for i in (deg..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = v[i].clone();
        for (j, &pj) in phi.iter().enumerate().take(deg) {
            if pj != 0 {
                let t = &c * &Rational::from_integer(pj);
                v[i - deg + j] -= &t;
            }
        }
        v[i] = Rational::zero();
    }
    v.truncate(deg);
    v.resize(deg, Rational::zero());
    v
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(Rational::one())
    }

    pub fn int(v: i64) -> Scalar {
        Scalar::Rat(Rational::from_integer(v))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rational::new(n, d))
    }

    /// The primitive n-th root of unity `exp(2 pi i / n)`.
    pub fn root_of_unity(n: u32) -> Scalar {
        assert!(n >= 1);
        Scalar::zeta_pow(n, 1)
    }

    /// `zeta_n^k` for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Scalar {
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        Scalar::from_power_basis(n, v)
    }

    /// Builds `sum_k coeffs[k] zeta_n^k`, reducing as needed.
    pub fn from_power_basis(n: u32, coeffs: Vec<Rational>) -> Scalar {
        let v = reduce_mod_cyclotomic(coeffs, n);
        Scalar::normalize(n, v)
    }

    fn normalize(order: u32, v: Vec<Rational>) -> Scalar {
        if v.iter().skip(1).all(|c| c.is_zero()) {
            return Scalar::Rat(v.into_iter().next().unwrap_or_else(Rational::zero));
        }
        Scalar::Cyc {
            order,
            coeffs: Arc::new(v),
        }
    }

    /// The field order n of Q(zeta_n) this value is stored over (1 for Q).
    pub fn order(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Cyc { order, .. } => *order,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn as_rat(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(q) => Some(q),
            Scalar::Cyc { .. } => None,
        }
    }

    /// Coefficients in the power basis of Q(zeta_target); `target` must be
    /// a multiple of `self.order()`.
    pub fn embed(&self, target: u32) -> Vec<Rational> {
        let deg = totient(target);
        match self {
            Scalar::Rat(q) => {
                let mut v = vec![Rational::zero(); deg];
                v[0] = q.clone();
                v
            }
            Scalar::Cyc { order, coeffs } => {
                if *order == target {
                    return coeffs.as_ref().clone();
                }
                assert!(
                    target.is_multiple_of(*order),
                    "cannot embed Q(zeta_{order}) in Q(zeta_{target})"
                );
                let step = (target / order) as usize;
                let mut v = vec![Rational::zero(); (coeffs.len() - 1) * step + 1];
                for (k, c) in coeffs.iter().enumerate() {
                    v[k * step] = c.clone();
                }
                reduce_mod_cyclotomic(v, target)
            }
        }
    }

    fn common_order(&self, other: &Scalar) -> u32 {
        self.order().lcm(&other.order())
    }

    fn mul_same_order(a: &[Rational], b: &[Rational], n: u32) -> Scalar {
        let mut prod = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += &(x * y);
                }
            }
        }
        Scalar::from_power_basis(n, prod)
    }

    /// Complex conjugate, i.e. zeta -> zeta^-1.
    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Cyc { order, coeffs } => {
                let n = *order as usize;
                let mut v = vec![Rational::zero(); n];
                for (k, c) in coeffs.iter().enumerate() {
                    v[(n - k) % n] += c;
                }
                Scalar::from_power_basis(*order, v)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Residue modulo a prime p with p = 1 (mod n), using the given image of
    /// zeta_n. Returns `None` when a denominator vanishes.
    pub fn mod_prime(&self, p: u64, zeta_image: u64) -> Option<u64> {
        match self {
            Scalar::Rat(q) => q.mod_prime(p),
            Scalar::Cyc { coeffs, .. } => {
                let mut acc = 0u64;
                let mut zk = 1u64;
                for c in coeffs.iter() {
                    let r = c.mod_prime(p)?;
                    acc = (acc + super::modular::mul_mod(r, zk, p)) % p;
                    zk = super::modular::mul_mod(zk, zeta_image, p);
                }
                Some(acc)
            }
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(q) if q.is_zero())
    }
}

impl One for Scalar {
    fn one() -> Scalar {
        Scalar::one()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.sub_ref(&rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(q) => Scalar::Rat(-q),
            Scalar::Cyc { order, coeffs } => Scalar::Cyc {
                order,
                coeffs: Arc::new(coeffs.iter().map(|c| -c).collect()),
            },
        }
    }
}

impl Ring for Scalar {
    fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let n = self.common_order(other);
                let a = self.embed(n);
                let b = other.embed(n);
                Scalar::normalize(n, a.iter().zip(&b).map(|(x, y)| x + y).collect())
            }
        }
    }

    fn sub_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => {
                let n = self.common_order(other);
                let a = self.embed(n);
                let b = other.embed(n);
                Scalar::normalize(n, a.iter().zip(&b).map(|(x, y)| x - y).collect())
            }
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Cyc { order, coeffs })
            | (Scalar::Cyc { order, coeffs }, Scalar::Rat(a)) => {
                if a.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Cyc {
                    order: *order,
                    coeffs: Arc::new(coeffs.iter().map(|c| c * a).collect()),
                }
            }
            _ => {
                let n = self.common_order(other);
                Scalar::mul_same_order(&self.embed(n), &other.embed(n), n)
            }
        }
    }

    fn add_assign_ref(&mut self, other: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, other) {
            *a += b;
            return;
        }
        *self = self.add_ref(other);
    }

    fn sub_assign_ref(&mut self, other: &Scalar) {
        if let (Scalar::Rat(a), Scalar::Rat(b)) = (&mut *self, other) {
            *a -= b;
            return;
        }
        *self = self.sub_ref(other);
    }

    fn from_i64(v: i64) -> Scalar {
        Scalar::int(v)
    }
}

impl Field for Scalar {
    fn try_inv(&self) -> Result<Scalar, AlgebraError> {
        match self {
            Scalar::Rat(q) => Ok(Scalar::Rat(q.inv()?)),
            Scalar::Cyc { order, coeffs } => {
                // Solve (multiplication by self) * x = 1 in the power basis.
                let n = *order;
                let deg = coeffs.len();
                let mut m = super::matrix::Matrix::<Rational>::zeros(deg, deg);
                for j in 0..deg {
                    let mut basis = vec![Rational::zero(); j + 1];
                    basis[j] = Rational::one();
                    let col = Scalar::mul_same_order(coeffs, &basis, n).embed(n);
                    for (i, c) in col.into_iter().enumerate() {
                        m[(i, j)] = c;
                    }
                }
                let mut rhs = vec![Rational::zero(); deg];
                rhs[0] = Rational::one();
                let x = m.solve(&rhs).map_err(|_| AlgebraError::DivisionByZero)?;
                Ok(Scalar::from_power_basis(n, x))
            }
        }
    }

    fn from_rational(q: Rational) -> Scalar {
        Scalar::Rat(q)
    }

    fn as_rational(&self) -> Option<Rational> {
        self.as_rat().cloned()
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Scalar {
        Scalar::Rat(q)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar::int(v)
    }
}

impl PartialEq for Scalar {
    /// Exact equality; values stored over different orders are compared
    /// after promotion.
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (
                Scalar::Cyc {
                    order: n,
                    coeffs: a,
                },
                Scalar::Cyc {
                    order: m,
                    coeffs: b,
                },
            ) if n == m => a == b,
            _ => self.sub_ref(other).is_zero(),
        }
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    /// Rationals print as `n/d`; other values as a sum of `c*E(n)^k` terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Cyc { order, coeffs } => {
                let mut first = true;
                for (k, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { "-" } else { "+" })?;
                    }
                    first = false;
                    let atom = match k {
                        0 => String::new(),
                        1 => format!("E({order})"),
                        _ => format!("E({order})^{k}"),
                    };
                    if k == 0 {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{atom}")?;
                    } else {
                        write!(f, "{mag}*{atom}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let i = Scalar::root_of_unity(4);
        assert_eq!(i.mul_ref(&i), Scalar::int(-1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let w = Scalar::root_of_unity(3);
        let s = Scalar::one().add_ref(&w).add_ref(&w.mul_ref(&w));
        assert!(s.is_zero());
        assert_eq!(w.pow(3), Scalar::one());
    }

    #[test]
    fn inverse_in_extension() {
        let w = Scalar::root_of_unity(5).add_ref(&Scalar::int(2));
        let inv = w.try_inv().unwrap();
        assert_eq!(w.mul_ref(&inv), Scalar::one());
    }

    #[test]
    fn promotion_between_orders() {
        let i = Scalar::root_of_unity(4);
        let w = Scalar::root_of_unity(3);
        let z12 = Scalar::root_of_unity(12);
        // zeta_12^3 = i, zeta_12^4 = w
        assert!(z12.pow(3) == i);
        assert!(z12.pow(4) == w);
        assert_eq!(i.mul_ref(&w).order(), 12);
        assert_eq!(i.conj().mul_ref(&i), Scalar::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::frac(-3, 6).to_string(), "-1/2");
        let x = Scalar::root_of_unity(4)
            .mul_ref(&Scalar::int(2))
            .add_ref(&Scalar::frac(1, 2));
        assert_eq!(x.to_string(), "1/2+2*E(4)");
        assert_eq!(Scalar::zeta_pow(3, 2).to_string(), "-1-E(3)");
    }

    #[test]
    fn residues_follow_the_field_structure() {
        // p = 13 = 1 mod 4; 5 has order 4 mod 13.
        let i = Scalar::root_of_unity(4);
        let r = i.mod_prime(13, 5).unwrap();
        assert_eq!(r, 5);
        assert_eq!(i.mul_ref(&i).mod_prime(13, 5).unwrap(), 12);
    }
}
