//! Sparse multivariate polynomials over named variable tables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{AlgebraError, Field, Ring, Scale};

/// A structured variable name `role[i,j,...]`, or a bare identifier when the
/// index tuple is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub role: String,
    pub index: Vec<String>,
}

impl Label {
    pub fn new(role: impl Into<String>, index: Vec<String>) -> Label {
        Label {
            role: role.into(),
            index,
        }
    }

    pub fn plain(role: impl Into<String>) -> Label {
        Label {
            role: role.into(),
            index: Vec::new(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index.is_empty() {
            write!(f, "{}", self.role)
        } else {
            write!(f, "{}[{}]", self.role, self.index.join(","))
        }
    }
}

/// Ordered list of variable labels. The order fixes the monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    labels: Vec<Label>,
    lookup: HashMap<Label, u32>,
}

impl VarTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: impl IntoIterator<Item = Label>) -> Result<Self, AlgebraError> {
        let mut t = VarTable::new();
        for l in labels {
            if t.lookup.contains_key(&l) {
                return Err(AlgebraError::Parse(format!("duplicate variable '{l}'")));
            }
            t.push(l);
        }
        Ok(t)
    }

    /// Index of `label`, appending it if absent.
    pub fn intern(&mut self, label: Label) -> u32 {
        if let Some(&i) = self.lookup.get(&label) {
            return i;
        }
        self.push(label)
    }

    fn push(&mut self, label: Label) -> u32 {
        let i = self.labels.len() as u32;
        self.lookup.insert(label.clone(), i);
        self.labels.push(label);
        i
    }

    pub fn get(&self, label: &Label) -> Option<u32> {
        self.lookup.get(label).copied()
    }

    pub fn label(&self, v: u32) -> &Label {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A monomial as sorted `(variable, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: SmallVec<[(u32, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(v: u32) -> Monomial {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: u32, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let mut factors = SmallVec::new();
        factors.push((v, e));
        Monomial { degree: e, factors }
    }

    /// Builds a monomial from arbitrary (possibly repeated) factors.
    pub fn from_factors(items: impl IntoIterator<Item = (u32, u32)>) -> Monomial {
        let mut map: BTreeMap<u32, u32> = BTreeMap::new();
        for (v, e) in items {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        let degree = map.values().sum();
        Monomial {
            degree,
            factors: map.into_iter().collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.factors
            .binary_search_by_key(&v, |f| f.0)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors: SmallVec<[(u32, u32); 4]> =
            SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    factors.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&a[i..]);
        factors.extend_from_slice(&b[j..]);
        Monomial {
            degree: self.degree + other.degree,
            factors,
        }
    }

    /// Splits into the parts in variables satisfying and failing `pred`.
    pub fn split(&self, pred: impl Fn(u32) -> bool) -> (Monomial, Monomial) {
        let (mut yes, mut no) = (Monomial::one(), Monomial::one());
        for &(v, e) in &self.factors {
            let m = if pred(v) { &mut yes } else { &mut no };
            m.factors.push((v, e));
            m.degree += e;
        }
        (yes, no)
    }

    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Monomial {
        Monomial::from_factors(self.factors.iter().map(|&(v, e)| (f(v), e)))
    }

    pub fn eval<F: Ring>(&self, value: &impl Fn(u32) -> Option<F>) -> Result<F, u32> {
        let mut acc = F::one();
        for &(v, e) in &self.factors {
            let x = value(v).ok_or(v)?;
            for _ in 0..e {
                acc = acc.mul_ref(&x);
            }
        }
        Ok(acc)
    }

    pub fn display(&self, vars: &VarTable) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    vars.label(v).to_string()
                } else {
                    format!("{}^{}", vars.label(v), e)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with variable 0 most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            let (a, b) = (&self.factors, &other.factors);
            for (x, y) in a.iter().zip(b.iter()) {
                if x.0 != y.0 {
                    // The monomial containing the smaller variable is larger.
                    return y.0.cmp(&x.0);
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: monomials with nonzero coefficients, stored in
/// increasing monomial order.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Ring> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: u32) -> Self {
        Self::monomial(Monomial::var(v), F::one())
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(items: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in items {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coefficient(&Monomial::one())
    }

    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> u32 {
        self.leading().map_or(0, |(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|f| f.0))
            .collect()
    }

    pub fn scale_by(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul_ref(c)))
                .collect(),
        }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_poly(other);
        out
    }

    pub fn add_assign_poly(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c.clone());
        }
        out
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), &a.mul_ref(b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(F::one());
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Evaluates at a point given by `value`; fails with the first
    /// unassigned variable.
    pub fn eval_with(&self, value: impl Fn(u32) -> Option<F>) -> Result<F, u32> {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            acc.add_assign_ref(&m.eval(&value)?.mul_ref(c));
        }
        Ok(acc)
    }

    /// Evaluates at a dense point indexed by variable.
    pub fn eval(&self, point: &[F]) -> Result<F, AlgebraError> {
        self.eval_with(|v| point.get(v as usize).cloned())
            .map_err(|v| AlgebraError::MissingAssignment(format!("#{v}")))
    }

    /// Composition: replaces each variable `v` by `image(v)`. Fails with the
    /// first variable that has no image.
    pub fn substitute_with<'a>(
        &self,
        image: impl Fn(u32) -> Option<&'a Polynomial<F>>,
    ) -> Result<Self, u32>
    where
        F: 'a,
    {
        let mut powers: HashMap<(u32, u32), Polynomial<F>> = HashMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for &(v, e) in m.factors() {
                if !powers.contains_key(&(v, e)) {
                    let base = image(v).ok_or(v)?;
                    powers.insert((v, e), base.pow(e));
                }
                t = t.mul_ref(&powers[&(v, e)]);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign_poly(&t);
        }
        Ok(out)
    }

    pub fn substitute(&self, images: &HashMap<u32, Polynomial<F>>) -> Result<Self, AlgebraError> {
        self.substitute_with(|v| images.get(&v))
            .map_err(|v| AlgebraError::MissingSubstitution(format!("#{v}")))
    }

    /// Renames variables; `f` must be injective on the variables present.
    pub fn map_vars(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Writes `self = sum_i h_i m_i` with `m_i` distinct monomials in the
    /// variables selected by `is_aux` and `h_i` free of them. Returns the
    /// pairs `(m_i, h_i)` in increasing order of `m_i`.
    pub fn coeff_extract(&self, is_aux: impl Fn(u32) -> bool) -> Vec<(Monomial, Self)> {
        let mut groups: BTreeMap<Monomial, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (aux, rest) = m.split(&is_aux);
            groups
                .entry(aux)
                .or_insert_with(Self::zero)
                .add_term(rest, c);
        }
        groups.into_iter().filter(|(_, h)| !h.is_zero()).collect()
    }

    /// Sum of the terms of degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<G: Ring>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<F: Field> Polynomial<F> {
    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale_by(&c.try_inv().expect("nonzero leading coefficient")),
        }
    }

    /// Canonical text with variables printed through `vars`.
    pub fn display(&self, vars: &VarTable) -> String {
        super::text::format_polynomial(self, vars)
    }
}

/// Total order used to sort generator lists: degree, then leading monomial,
/// then the remaining terms from the top, then coefficient text.
pub fn canonical_cmp<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let mut ia = a.terms().rev();
        let mut ib = b.terms().rev();
        loop {
            match (ia.next(), ib.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let o = ma.cmp(mb).then_with(|| ca.to_string().cmp(&cb.to_string()));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
        }
    })
}

/// Drops zeros, makes every polynomial monic, sorts canonically and removes
/// duplicates.
pub fn canonicalize<F: Field>(
    polys: impl IntoIterator<Item = Polynomial<F>>,
) -> Vec<Polynomial<F>> {
    let mut v: Vec<Polynomial<F>> = polys
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| p.monic())
        .collect();
    v.sort_by(canonical_cmp);
    v.dedup();
    v
}

impl<F: Ring> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .factors()
                    .iter()
                    .map(|&(v, e)| format!("x{v}^{e}"))
                    .collect();
                format!("({c:?})*{}", vars.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Ring> Zero for Polynomial<F> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Ring> One for Polynomial<F> {
    fn one() -> Self {
        Polynomial::constant(F::one())
    }
}

impl<F: Ring> Add for Polynomial<F> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign_poly(&rhs);
        self
    }
}

impl<F: Ring> Sub for Polynomial<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Polynomial::sub_ref(&self, &rhs)
    }
}

impl<F: Ring> Mul for Polynomial<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Polynomial::mul_ref(&self, &rhs)
    }
}

impl<F: Ring> Neg for Polynomial<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<F: Ring> Ring for Polynomial<F> {
    fn add_ref(&self, other: &Self) -> Self {
        Polynomial::add_ref(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Polynomial::sub_ref(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Polynomial::mul_ref(self, other)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        self.add_assign_poly(other);
    }
    fn from_i64(v: i64) -> Self {
        Polynomial::constant(F::from_i64(v))
    }
}

impl<F: Ring> Scale<F> for Polynomial<F> {
    fn scale(&self, s: &F) -> Self {
        self.scale_by(s)
    }
}
