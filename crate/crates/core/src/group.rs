//! Finite groups given by Cayley tables: validation, conjugacy classes,
//! centralizers and commuting tuples.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exact::Phase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("Cayley table is empty")]
    Empty,
    #[error("Cayley table is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("Cayley table entry {value} at ({row}, {col}) is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("NotLatin: element {value} repeats in {line} {index}")]
    NotLatin {
        line: &'static str,
        index: usize,
        value: usize,
    },
    #[error("NoIdentity: no element e with e·g = g·e = g for all g")]
    NoIdentity,
    #[error("NoInverse: element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("NotAssociative: ({0}·{1})·{2} != {0}·({1}·{2})")]
    NotAssociative(usize, usize, usize),
}

/// A finite group on the elements `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
}

/// A subgroup, as a sorted set of element indices of its parent group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

/// A conjugacy class; the representative is its smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table. `table[a][b]` is the index of `a·b`.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row: i,
                    len: r.len(),
                    expected: n,
                });
            }
            if let Some((j, &v)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::OutOfRange {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
        let table: Vec<usize> = rows.iter().flatten().copied().collect();
        let at = |a: usize, b: usize| table[a * n + b];

        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let v = at(i, j);
                if std::mem::replace(&mut seen_row[v], true) {
                    return Err(GroupError::NotLatin {
                        line: "row",
                        index: i,
                        value: v,
                    });
                }
                let w = at(j, i);
                if std::mem::replace(&mut seen_col[w], true) {
                    return Err(GroupError::NotLatin {
                        line: "column",
                        index: i,
                        value: w,
                    });
                }
            }
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or(GroupError::NoIdentity)?;

        let mut inverse = Vec::with_capacity(n);
        for g in 0..n {
            let h = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or(GroupError::NoInverse(g))?;
            inverse.push(h);
        }

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }

        let mut group = FiniteGroup {
            order: n,
            table,
            identity,
            inverse,
            classes: Vec::new(),
            class_of: vec![0; n],
        };
        group.classes = group.compute_classes();
        for (ci, c) in group.classes.iter().enumerate() {
            for &g in &c.members {
                group.class_of[g] = ci;
            }
        }
        Ok(group)
    }

    /// The abelian group ℤ/n₁ × … × ℤ/n_r with mixed-radix element encoding,
    /// least significant factor first.
    pub fn abelian(invariants: &[u64]) -> Result<Self, GroupError> {
        if invariants.iter().any(|&n| n == 0) {
            return Err(GroupError::Empty);
        }
        let n: usize = invariants.iter().map(|&x| x as usize).product();
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                let ca = abelian_coords(invariants, a);
                (0..n)
                    .map(|b| {
                        let cb = abelian_coords(invariants, b);
                        let sum: Vec<u64> = ca
                            .iter()
                            .zip(&cb)
                            .zip(invariants)
                            .map(|((x, y), m)| (x + y) % m)
                            .collect();
                        abelian_index(invariants, &sum)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(&rows)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn product(&self, gs: &[usize]) -> usize {
        gs.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `t · g · t⁻¹`
    pub fn conjugate(&self, t: usize, g: usize) -> usize {
        self.mul(self.mul(t, g), self.inv(t))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.commute(a, b)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn power(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    /// Rows of the Cayley table.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    fn compute_classes(&self) -> Vec<ConjClass> {
        let mut assigned = vec![false; self.order];
        let mut out = Vec::new();
        for g in self.elements() {
            if assigned[g] {
                continue;
            }
            let members: BTreeSet<usize> =
                self.elements().map(|t| self.conjugate(t, g)).collect();
            for &m in &members {
                assigned[m] = true;
            }
            out.push(ConjClass {
                representative: g,
                members: members.into_iter().collect(),
            });
        }
        // identity first, then by representative
        out.sort_by_key(|c| (c.representative != self.identity, c.representative));
        out
    }

    /// Conjugacy classes, identity class first, the rest by representative index.
    pub fn conjugacy_classes(&self) -> &[ConjClass] {
        &self.classes
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) of the class containing `g`.
    pub fn class_index(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_of(&self, g: usize) -> &ConjClass {
        &self.classes[self.class_of[g]]
    }

    /// Some `t` with `t · g · t⁻¹ = h`, if `g` and `h` are conjugate.
    pub fn conjugator(&self, g: usize, h: usize) -> Option<usize> {
        self.elements().find(|&t| self.conjugate(t, g) == h)
    }

    /// Elements commuting with every member of `gs`; the whole group for an empty list.
    pub fn centralizer(&self, gs: &[usize]) -> Subgroup {
        Subgroup {
            members: self
                .elements()
                .filter(|&h| gs.iter().all(|&g| self.commute(g, h)))
                .collect(),
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: self.elements().collect(),
        }
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut members = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup {
            members: members.into_iter().collect(),
        }
    }

    /// Checks closure under product and inverse.
    pub fn subgroup(&self, members: &[usize]) -> Option<Subgroup> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        let closed = set.contains(&self.identity)
            && set.iter().all(|&a| {
                set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
            });
        closed.then(|| Subgroup {
            members: set.into_iter().collect(),
        })
    }

    /// All pairwise-commuting `k`-tuples in lexicographic order; with
    /// `product_one`, only those with `g₁⋯g_k = 1`.
    pub fn commuting_tuples(&self, k: usize, product_one: bool) -> Vec<Vec<usize>> {
        assert!(k >= 1, "tuple length must be positive");
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.extend_tuples(k, product_one, &mut cur, &mut out);
        out
    }

    fn extend_tuples(
        &self,
        k: usize,
        product_one: bool,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() + 1 == k && product_one {
            let last = self.inv(self.product(cur));
            if cur.iter().all(|&g| self.commute(g, last)) {
                cur.push(last);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for g in self.elements() {
            if cur.iter().all(|&h| self.commute(g, h)) {
                cur.push(g);
                self.extend_tuples(k, product_one, cur, out);
                cur.pop();
            }
        }
    }

    /// Conjugates every entry of a tuple by `t`.
    pub fn conjugate_tuple(&self, t: usize, gs: &[usize]) -> Vec<usize> {
        gs.iter().map(|&g| self.conjugate(t, g)).collect()
    }

    /// Representatives (lexicographically least member) of the simultaneous
    /// conjugation orbits on commuting `k`-tuples.
    pub fn tuple_classes(&self, k: usize, product_one: bool) -> Vec<Vec<usize>> {
        self.commuting_tuples(k, product_one)
            .into_iter()
            .filter(|tuple| {
                self.elements()
                    .all(|t| self.conjugate_tuple(t, tuple) >= *tuple)
            })
            .collect()
    }
}

/// A homomorphism from a subgroup into ℚ/ℤ, stored by its values on the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    values: BTreeMap<usize, Phase>,
}

impl Character {
    pub fn trivial(domain: &Subgroup) -> Self {
        Character {
            values: domain.members().iter().map(|&g| (g, Phase::zero())).collect(),
        }
    }

    pub fn from_values(values: BTreeMap<usize, Phase>) -> Self {
        Character { values }
    }

    pub fn domain(&self) -> Vec<usize> {
        self.values.keys().copied().collect()
    }

    pub fn values(&self) -> &BTreeMap<usize, Phase> {
        &self.values
    }

    /// Value at `g`; `None` outside the domain.
    pub fn get(&self, g: usize) -> Option<&Phase> {
        self.values.get(&g)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(Phase::is_zero)
    }

    pub fn restrict(&self, sub: &Subgroup) -> Option<Character> {
        sub.members()
            .iter()
            .map(|&g| self.values.get(&g).map(|v| (g, v.clone())))
            .collect::<Option<_>>()
            .map(|values| Character { values })
    }

    pub fn negate(&self) -> Character {
        Character {
            values: self.values.iter().map(|(&g, v)| (g, -v)).collect(),
        }
    }

    /// First pair `(h, k)` in the domain with `χ(hk) != χ(h) + χ(k)`, if any.
    pub fn homomorphism_violation(&self, group: &FiniteGroup) -> Option<(usize, usize)> {
        for (&h, a) in &self.values {
            for (&k, b) in &self.values {
                match self.values.get(&group.mul(h, k)) {
                    Some(c) if *c == a + b => {}
                    _ => return Some((h, k)),
                }
            }
        }
        None
    }
}

/// Coordinates of an element of ℤ/n₁ × … × ℤ/n_r from its mixed-radix index.
pub fn abelian_coords(invariants: &[u64], mut index: usize) -> Vec<u64> {
    invariants
        .iter()
        .map(|&n| {
            let c = index as u64 % n;
            index /= n as usize;
            c
        })
        .collect()
}

pub fn abelian_index(invariants: &[u64], coords: &[u64]) -> usize {
    coords
        .iter()
        .zip(invariants)
        .rev()
        .fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
}
