//! Hodge and Betti tables keyed by exact rational (bi)degrees.

use std::collections::BTreeMap;

use crate::exact::{fmt_rational, Rational};

/// Finitely supported map `(p, q) ↦ h^{p,q}`; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgeTable {
    entries: BTreeMap<(Rational, Rational), u64>,
}

/// Finitely supported map `d ↦ b^d`; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<Rational, u64>,
}

impl HodgeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, p: Rational, q: Rational, dim: u64) {
        if dim == 0 {
            return;
        }
        *self.entries.entry((p, q)).or_insert(0) += dim;
    }

    pub fn get(&self, p: &Rational, q: &Rational) -> u64 {
        self.entries
            .get(&(p.clone(), q.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(Rational, Rational), u64> {
        &self.entries
    }

    pub fn merge(&mut self, other: &HodgeTable) {
        for ((p, q), d) in &other.entries {
            self.add(p.clone(), q.clone(), *d);
        }
    }

    /// Every bidegree moved by `(shift, shift)`.
    pub fn shifted(&self, shift: &Rational) -> HodgeTable {
        HodgeTable {
            entries: self
                .entries
                .iter()
                .map(|((p, q), d)| ((p + shift, q + shift), *d))
                .collect(),
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Anti-diagonal sums `b^d = Σ_{p+q=d} h^{p,q}`.
    pub fn betti(&self) -> BettiTable {
        let mut b = BettiTable::new();
        for ((p, q), d) in &self.entries {
            b.add(p + q, *d);
        }
        b
    }

    /// `h^{p,q} = h^{n−p,n−q}` for every bidegree.
    pub fn is_symmetric_about(&self, n: &Rational) -> bool {
        self.entries
            .iter()
            .all(|((p, q), d)| self.get(&(n - p), &(n - q)) == *d)
    }

    /// `h^{p,q} = h^{q,p}` for every bidegree.
    pub fn is_conjugation_symmetric(&self) -> bool {
        self.entries.iter().all(|((p, q), d)| self.get(q, p) == *d)
    }
}

/// Dimension-level Poincaré duality for a complex dimension `n` orbifold.
pub fn duality_check(table: &HodgeTable, n: usize) -> bool {
    table.is_symmetric_about(&Rational::from_integer(n.into()))
}

impl BettiTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, degree: Rational, dim: u64) {
        if dim == 0 {
            return;
        }
        *self.entries.entry(degree).or_insert(0) += dim;
    }

    pub fn get(&self, degree: &Rational) -> u64 {
        self.entries.get(degree).copied().unwrap_or(0)
    }

    pub fn get_int(&self, degree: i64) -> u64 {
        self.get(&Rational::from_integer(degree.into()))
    }

    pub fn entries(&self) -> &BTreeMap<Rational, u64> {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Betti numbers in degrees `0..=max` when every degree is an integer.
    pub fn as_vec(&self, max: i64) -> Vec<u64> {
        (0..=max).map(|d| self.get_int(d)).collect()
    }
}

impl std::fmt::Display for HodgeTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for ((p, q), d) in &self.entries {
            writeln!(f, "h^{{{},{}}} = {}", fmt_rational(p), fmt_rational(q), d)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for BettiTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, d) in &self.entries {
            writeln!(f, "b^{} = {}", fmt_rational(k), d)?;
        }
        Ok(())
    }
}
