//! Finite permutation groups given by generators.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;

use super::GroupError;

/// A permutation of `0..n`, stored as its image list.
pub type Perm = Vec<u32>;

/// A finite group realized as permutations of a label set.
///
/// Elements are numbered in breadth-first order from the identity (element
/// 0) using the generators in the order given. Products follow the
/// convention `(ab)(x) = a(b(x))`.
#[derive(Clone)]
pub struct FiniteGroup {
    labels: Vec<String>,
    elements: Vec<Perm>,
    table: Vec<Vec<u32>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    orders: Vec<u32>,
    exponent: u32,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(order {}, labels {:?})",
            self.order(),
            self.labels
        )
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.elements == other.elements
    }
}

fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

/// Parses cycle notation such as `(A C G T)(B D)` over `labels`. Cycle
/// entries may be separated by spaces or commas; `()` is the identity.
pub fn parse_cycles(text: &str, labels: &[String]) -> Result<Perm, GroupError> {
    let index: HashMap<&str, u32> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i as u32))
        .collect();
    let mut perm: Perm = (0..labels.len() as u32).collect();
    let mut seen = vec![false; labels.len()];
    let trimmed = text.trim();
    let mut rest = trimmed;
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(GroupError::Cycle(format!("expected '(' in {trimmed:?}")));
        };
        let Some(end) = body.find(')') else {
            return Err(GroupError::Cycle(format!("unclosed cycle in {trimmed:?}")));
        };
        let mut cycle = Vec::new();
        for tok in body[..end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let &i = index.get(tok).ok_or_else(|| {
                GroupError::Cycle(format!("unknown label {tok:?} in {trimmed:?}"))
            })?;
            if seen[i as usize] {
                return Err(GroupError::Cycle(format!(
                    "label {tok:?} repeated in {trimmed:?}"
                )));
            }
            seen[i as usize] = true;
            cycle.push(i);
        }
        for k in 0..cycle.len() {
            perm[cycle[k] as usize] = cycle[(k + 1) % cycle.len()];
        }
        rest = body[end + 1..].trim_start();
    }
    Ok(perm)
}

impl FiniteGroup {
    /// Closes the given permutations under composition.
    pub fn from_generators(labels: Vec<String>, generators: Vec<Perm>) -> Result<Self, GroupError> {
        let n = labels.len();
        for g in &generators {
            let mut hit = vec![false; n];
            if g.len() != n
                || g.iter()
                    .any(|&x| (x as usize) >= n || std::mem::replace(&mut hit[x as usize], true))
            {
                return Err(GroupError::LabelMismatch(format!(
                    "generator {g:?} is not a permutation of {n} labels"
                )));
            }
        }
        let identity: Perm = (0..n as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Perm, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &generators {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let order = elements.len();
        let table: Vec<Vec<u32>> = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| index[&compose(a, b)] as u32)
                    .collect()
            })
            .collect();
        let inverse: Vec<usize> = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a][b] == 0)
                    .expect("closed group")
            })
            .collect();
        let generator_index = generators.iter().map(|g| index[g]).collect();
        let orders: Vec<u32> = (0..order)
            .map(|a| {
                let (mut k, mut x) = (1u32, a);
                while x != 0 {
                    x = table[x][a] as usize;
                    k += 1;
                }
                k
            })
            .collect();
        let exponent = orders.iter().fold(1u32, |acc, &o| acc.lcm(&o));
        let group = FiniteGroup {
            labels,
            elements,
            table,
            inverse,
            generators: generator_index,
            orders,
            exponent,
        };
        group.check_axioms()?;
        Ok(group)
    }

    /// Parses generators in cycle notation.
    pub fn from_cycles(labels: &[&str], cycles: &[&str]) -> Result<Self, GroupError> {
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let gens = cycles
            .iter()
            .map(|c| parse_cycles(c, &labels))
            .collect::<Result<_, _>>()?;
        Self::from_generators(labels, gens)
    }

    pub fn trivial() -> Self {
        Self::from_generators(Vec::new(), Vec::new()).expect("trivial group")
    }

    /// Cyclic group of order n acting regularly on labels `0..n`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let gen = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
        Self::from_generators(labels, if n > 1 { vec![gen] } else { Vec::new() })
            .expect("cyclic group")
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order();
        for a in 0..n {
            if self.table[0][a] as usize != a || self.table[a][0] as usize != a {
                return Err(GroupError::Axioms("identity".into()));
            }
            if self.table[a][self.inverse[a]] != 0 || self.table[self.inverse[a]][a] != 0 {
                return Err(GroupError::Axioms(format!("inverse of element {a}")));
            }
        }
        // Permutation composition is associative; spot-check the table
        // against it on generators.
        for &g in &self.generators {
            for a in 0..n {
                for b in 0..n {
                    if self.mul(self.mul(a, b), g) != self.mul(a, self.mul(b, g)) {
                        return Err(GroupError::Axioms("associativity".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, g: usize) -> &[u32] {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// Index of the given permutation, if it belongs to the group.
    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Number of elements of each order, keyed by order.
    pub fn order_statistics(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for &o in &self.orders {
            *out.entry(o).or_insert(0) += 1;
        }
        out
    }

    /// Smallest subgroup containing `gens`, as sorted element indices.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order()];
        members[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !members[b] {
                    members[b] = true;
                    queue.push_back(b);
                }
            }
        }
        (0..self.order()).filter(|&a| members[a]).collect()
    }

    /// Elements fixing every label in `points` under the defining action.
    pub fn stabilizer(&self, points: &[u32]) -> Vec<usize> {
        (0..self.order())
            .filter(|&g| points.iter().all(|&p| self.elements[g][p as usize] == p))
            .collect()
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for a in 0..self.order() {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order())
                .map(|g| self.mul(self.mul(g, a), self.inv(g)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_group_of_order_eight() {
        let g = FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A C G T)", "(A G)"]).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.conjugacy_classes().len(), 5);
    }

    #[test]
    fn transpositions_generate_a_klein_group() {
        let g = FiniteGroup::from_cycles(&["A", "C", "G", "T"], &["(A G)", "(C T)"]).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn empty_generator_list_gives_the_trivial_group() {
        let g = FiniteGroup::from_cycles(&["A", "C"], &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn products_compose_right_to_left() {
        let g = FiniteGroup::from_cycles(&["1", "2", "3"], &["(1 2)", "(2 3)"]).unwrap();
        assert_eq!(g.order(), 6);
        let (a, b) = (g.generators()[0], g.generators()[1]);
        let ab = g.element(g.mul(a, b)).to_vec();
        // (1 2)(2 3) sends 2 -> 3 -> 3 and 3 -> 2 -> 1.
        assert_eq!(ab, vec![1, 2, 0]);
    }

    #[test]
    fn bad_cycles_are_rejected() {
        let labels: Vec<String> = ["A", "C"].iter().map(|s| s.to_string()).collect();
        assert!(parse_cycles("(A X)", &labels).is_err());
        assert!(parse_cycles("(A A)", &labels).is_err());
        assert!(parse_cycles("A C", &labels).is_err());
        assert_eq!(parse_cycles("()", &labels).unwrap(), vec![0, 1]);
        assert_eq!(parse_cycles("(A,C)", &labels).unwrap(), vec![1, 0]);
    }
}
