//! Shared machinery for global quotients `Y/G` where `Y` is either ℂⁿ or a
//! complex torus ℂⁿ/Λ: fixed loci and their components, sector orbits with
//! stabilizers, degree shifts, and character-twisted Hodge numbers.
//!
//! Points of a torus are written in lattice coordinates modulo ℤ²ⁿ. For a
//! linear quotient there are no lattice coordinates at all, every fixed locus
//! is a connected vector subspace, and its only "point" is the empty vector.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{
    lcm_level, smith_normal_form, CycMatrix, CycVector, Cyclotomic, IntMatrix, Rational,
    SmithForm,
};
use crate::group::{Character, ConjClass, FiniteGroup, Subgroup};
use crate::hodge::HodgeTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbifoldError {
    #[error("expected one matrix per group element ({expected}), got {got}")]
    WrongMatrixCount { expected: usize, got: usize },
    #[error("matrix for element {element} is not {dim}x{dim}")]
    ShapeMismatch { element: usize, dim: usize },
    #[error("NotIdentityAtOne: the identity element does not act as the identity matrix")]
    NotIdentityAtOne,
    #[error("NotHomomorphism: rep({0})·rep({1}) != rep({0}·{1})")]
    NotHomomorphism(usize, usize),
    #[error("lattice needs {expected} generators, got {got}")]
    WrongLatticeSize { expected: usize, got: usize },
    #[error("lattice generators are not linearly independent over ℝ")]
    DegenerateLattice,
    #[error("LatticeNotPreserved: element {element} maps lattice generator {generator} to non-integral coordinates [{image}]")]
    LatticeNotPreserved {
        element: usize,
        generator: usize,
        image: String,
    },
    #[error("generators do not close to a group within {0} elements")]
    GroupTooLarge(usize),
    #[error("NonCommutingTuple: elements {0} and {1} do not commute")]
    NonCommutingTuple(usize, usize),
    #[error("NonIntegralDimension: sector {class}, component orbit {orbit}: h^{{{p},{q}}} = {value}")]
    NonIntegralDimension {
        class: usize,
        orbit: usize,
        p: usize,
        q: usize,
        value: String,
    },
}

pub type Point = Vec<Rational>;

/// Underlying space of the quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Linear,
    Torus,
}

/// A finite group acting linearly on ℂⁿ, optionally descending to ℂⁿ/Λ.
#[derive(Clone, Debug)]
pub struct GlobalQuotient {
    group: FiniteGroup,
    cdim: usize,
    level: u32,
    rep: Vec<CycMatrix>,
    /// Action on lattice coordinates; `0×0` matrices for a linear quotient.
    lattice_action: Vec<IntMatrix>,
    kind: SpaceKind,
    sectors: OnceLock<Vec<Sector>>,
}

/// The common fixed set of a commuting family of elements.
#[derive(Clone, Debug)]
pub struct FixedLocus {
    elements: Vec<usize>,
    snf: SmithForm,
    factors: Vec<BigInt>,
    tangent: Vec<CycVector>,
}

/// A C-orbit of connected components of a fixed locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentOrbit {
    /// Canonical base point of the lexicographically first component.
    pub representative: Point,
    pub members: Vec<Point>,
    /// Elements of the acting group mapping the representative component to itself.
    pub stabilizer: Subgroup,
}

/// A sector `X_(g) = Fix(g)/C(g)` for one conjugacy class.
#[derive(Clone, Debug)]
pub struct Sector {
    pub class_index: usize,
    pub class: ConjClass,
    pub iota: Rational,
    pub centralizer: Subgroup,
    pub locus: FixedLocus,
    pub orbits: Vec<ComponentOrbit>,
}

fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

impl FixedLocus {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Complex basis of the common fixed subspace in ℂⁿ.
    pub fn tangent(&self) -> &[CycVector] {
        &self.tangent
    }

    pub fn complex_dim(&self) -> usize {
        self.tangent.len()
    }

    /// Nonzero elementary divisors of the stacked congruence system.
    pub fn elementary_divisors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Number of connected components: the product of elementary divisors.
    pub fn component_count(&self) -> BigInt {
        self.factors.iter().product()
    }

    fn real_dim(&self) -> usize {
        self.snf.v.rows()
    }

    /// Saturated integer basis of the tangent sublattice (kernel ∩ ℤ²ⁿ).
    pub fn directions(&self) -> Vec<Vec<BigInt>> {
        (self.factors.len()..self.real_dim())
            .map(|j| self.snf.v.column(j))
            .collect()
    }

    fn base_point(&self, label: &[Rational]) -> Point {
        let n = self.real_dim();
        (0..n)
            .map(|i| {
                let x: Rational = label
                    .iter()
                    .enumerate()
                    .map(|(j, l)| l * &self.snf.v[(i, j)])
                    .sum();
                frac_part(&x)
            })
            .collect()
    }

    /// Canonical base points of all components, sorted lexicographically.
    pub fn components(&self) -> Vec<Point> {
        let mut labels: Vec<Vec<Rational>> = vec![vec![]];
        for d in &self.factors {
            let mut next = Vec::new();
            let mut a = BigInt::zero();
            while &a < d {
                for l in &labels {
                    let mut l = l.clone();
                    l.push(Rational::new(a.clone(), d.clone()));
                    next.push(l);
                }
                a += 1;
            }
            labels = next;
        }
        let mut points: Vec<Point> = labels.iter().map(|l| self.base_point(l)).collect();
        points.sort();
        points
    }

    /// Canonical base point of the component containing `p`, or `None` when
    /// `p` is not in the locus.
    pub fn component_of(&self, p: &[Rational]) -> Option<Point> {
        let n = self.real_dim();
        assert_eq!(p.len(), n, "point has wrong dimension");
        let mut label = Vec::with_capacity(self.factors.len());
        for (i, d) in self.factors.iter().enumerate() {
            let y: Rational = (0..n).map(|j| &p[j] * &self.snf.v_inv[(i, j)]).sum();
            let scaled = &y * d;
            if !scaled.is_integer() {
                return None;
            }
            label.push(frac_part(&y));
        }
        Some(self.base_point(&label))
    }
}

impl GlobalQuotient {
    /// Validates the representation and assembles the quotient. All matrices
    /// are embedded into a common cyclotomic level first.
    pub(crate) fn build(
        group: FiniteGroup,
        cdim: usize,
        rep: Vec<CycMatrix>,
        lattice_action: Vec<IntMatrix>,
        kind: SpaceKind,
    ) -> Result<Self, OrbifoldError> {
        if rep.len() != group.order() {
            return Err(OrbifoldError::WrongMatrixCount {
                expected: group.order(),
                got: rep.len(),
            });
        }
        if let Some(g) = rep
            .iter()
            .position(|m| m.rows() != cdim || m.cols() != cdim)
        {
            return Err(OrbifoldError::ShapeMismatch {
                element: g,
                dim: cdim,
            });
        }
        let level = rep.iter().fold(1, |l, m| lcm_level(l, m.level()));
        let rep: Vec<CycMatrix> = rep.into_iter().map(|m| m.embed(level)).collect();
        if !rep[group.identity()].is_identity() {
            return Err(OrbifoldError::NotIdentityAtOne);
        }
        for g in group.elements() {
            for h in group.elements() {
                if &rep[g] * &rep[h] != rep[group.mul(g, h)] {
                    return Err(OrbifoldError::NotHomomorphism(g, h));
                }
            }
        }
        Ok(GlobalQuotient {
            group,
            cdim,
            level,
            rep,
            lattice_action,
            kind,
            sectors: OnceLock::new(),
        })
    }

    /// Turns a validated linear action into a torus action with the given
    /// integral action on lattice coordinates.
    pub(crate) fn with_lattice_action(mut self, lattice_action: Vec<IntMatrix>) -> Self {
        self.lattice_action = lattice_action;
        self.kind = SpaceKind::Torus;
        self.sectors = OnceLock::new();
        self
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn complex_dim(&self) -> usize {
        self.cdim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn rep(&self, g: usize) -> &CycMatrix {
        &self.rep[g]
    }

    pub fn lattice_action(&self, g: usize) -> &IntMatrix {
        &self.lattice_action[g]
    }

    fn real_coords(&self) -> usize {
        self.lattice_action
            .first()
            .map_or(0, IntMatrix::cols)
    }

    /// `h · p` modulo the lattice.
    pub fn act(&self, h: usize, p: &[Rational]) -> Point {
        let a = &self.lattice_action[h];
        (0..a.rows())
            .map(|i| {
                let x: Rational = (0..a.cols())
                    .map(|j| &p[j] * &a[(i, j)])
                    .sum();
                frac_part(&x)
            })
            .collect()
    }

    /// The common fixed locus of a pairwise-commuting family.
    pub fn fixed_locus(&self, elements: &[usize]) -> Result<FixedLocus, OrbifoldError> {
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[i + 1..] {
                if !self.group.commute(a, b) {
                    return Err(OrbifoldError::NonCommutingTuple(a, b));
                }
            }
        }
        Ok(self.intersection_locus(elements))
    }

    /// Fixed set of all `elements`, commuting or not.
    pub(crate) fn intersection_locus(&self, elements: &[usize]) -> FixedLocus {
        let m = self.real_coords();
        let mut stacked = IntMatrix::zeros(0, m);
        let mut complex = CycMatrix::zeros(0, self.cdim, self.level);
        for &g in elements {
            stacked = stacked.vstack(&self.lattice_action[g].minus_identity());
            complex = complex.vstack(&(&self.rep[g] - &CycMatrix::identity(self.cdim, self.level)));
        }
        let snf = smith_normal_form(&stacked);
        let factors = snf.invariant_factors();
        let tangent = complex.kernel_basis();
        if self.kind == SpaceKind::Torus {
            debug_assert_eq!(2 * tangent.len(), m - factors.len());
        }
        FixedLocus {
            elements: elements.to_vec(),
            snf,
            factors,
            tangent,
        }
    }

    /// Orbits of `acting` on the components of `locus`; `acting` must preserve the locus.
    pub fn component_orbits(&self, locus: &FixedLocus, acting: &Subgroup) -> Vec<ComponentOrbit> {
        let components = locus.components();
        let mut seen = BTreeSet::new();
        let mut orbits = Vec::new();
        for c in &components {
            if seen.contains(c) {
                continue;
            }
            let mut members = BTreeSet::new();
            let mut stabilizer = Vec::new();
            for &h in acting.members() {
                let image = locus
                    .component_of(&self.act(h, c))
                    .expect("acting group must preserve the fixed locus");
                if &image == c {
                    stabilizer.push(h);
                }
                members.insert(image);
            }
            seen.extend(members.iter().cloned());
            orbits.push(ComponentOrbit {
                representative: c.clone(),
                members: members.into_iter().collect(),
                stabilizer: self
                    .group
                    .subgroup(&stabilizer)
                    .expect("stabilizer is a subgroup"),
            });
        }
        orbits
    }

    /// Multiplicity of `e^{2πik/m}` as an eigenvalue of `rep(g)`, `m` the order of `g`.
    pub fn eigen_multiplicities(&self, g: usize) -> Vec<usize> {
        let m = self.group.element_order(g);
        let level = lcm_level(self.level, m as u32);
        let a = self.rep[g].embed(level);
        (0..m)
            .map(|k| {
                let shift = CycMatrix::identity(self.cdim, level)
                    .scale(&Cyclotomic::zeta_pow(m as u32, k as i64));
                (&a - &shift).kernel_basis().len()
            })
            .collect()
    }

    /// Degree shifting number `ι(g) = Σ_k mult_k · k/m`.
    pub fn degree_shift(&self, g: usize) -> Rational {
        let mults = self.eigen_multiplicities(g);
        let m = mults.len() as i64;
        debug_assert_eq!(mults.iter().sum::<usize>(), self.cdim);
        mults
            .iter()
            .enumerate()
            .map(|(k, &c)| Rational::new(BigInt::from(k as i64 * c as i64), BigInt::from(m)))
            .sum()
    }

    /// One sector per conjugacy class, identity class first; computed once.
    pub fn sectors(&self) -> &[Sector] {
        self.sectors.get_or_init(|| self.compute_sectors())
    }

    fn compute_sectors(&self) -> Vec<Sector> {
        self.group
            .conjugacy_classes()
            .iter()
            .enumerate()
            .map(|(class_index, class)| {
                let g = class.representative;
                let locus = self.intersection_locus(&[g]);
                let centralizer = self.group.centralizer(&[g]);
                let orbits = self.component_orbits(&locus, &centralizer);
                Sector {
                    class_index,
                    class: class.clone(),
                    iota: self.degree_shift(g),
                    centralizer,
                    locus,
                    orbits,
                }
            })
            .collect()
    }

    /// Hodge numbers (before the degree shift) of one component orbit with
    /// coefficients in the flat bundle given by `chi` on its stabilizer:
    /// the `χ`-twisted average of traces on `Λᵖ W* ⊗ Λ^q W̄*`.
    pub fn orbit_hodge(
        &self,
        sector: &Sector,
        orbit_index: usize,
        chi: &Character,
    ) -> Result<HodgeTable, OrbifoldError> {
        let orbit = &sector.orbits[orbit_index];
        let tangent = sector.locus.tangent();
        let d = tangent.len();
        let top = match self.kind {
            SpaceKind::Torus => d,
            SpaceKind::Linear => 0,
        };
        let order = orbit.stabilizer.order();
        let mut sums = vec![Cyclotomic::zero(1); (top + 1) * (top + 1)];
        for &h in orbit.stabilizer.members() {
            let weight = Cyclotomic::from_phase(
                1,
                chi.get(h).expect("character must be defined on the stabilizer"),
            );
            let restricted = if d == 0 {
                CycMatrix::zeros(0, 0, self.level)
            } else {
                self.rep[h]
                    .restrict(tangent)
                    .expect("stabilizer preserves the tangent space")
            };
            let ext: Vec<Cyclotomic> = (0..=top).map(|p| restricted.exterior_trace(p)).collect();
            let ext_bar: Vec<Cyclotomic> = ext.iter().map(Cyclotomic::conj).collect();
            for p in 0..=top {
                for q in 0..=top {
                    let t = &(&weight * &ext[p]) * &ext_bar[q];
                    let s = &mut sums[p * (top + 1) + q];
                    *s = &*s + &t;
                }
            }
        }
        let mut table = HodgeTable::new();
        let denom = Rational::from_integer(BigInt::from(order));
        for p in 0..=top {
            for q in 0..=top {
                let avg = sums[p * (top + 1) + q].as_rational().map(|x| x / &denom);
                let dim = avg
                    .as_ref()
                    .filter(|x| x.is_integer() && !x.is_negative())
                    .and_then(|x| u64::try_from(x.to_integer()).ok());
                let Some(dim) = dim else {
                    return Err(OrbifoldError::NonIntegralDimension {
                        class: sector.class.representative,
                        orbit: orbit_index,
                        p,
                        q,
                        value: avg.map_or_else(
                            || sums[p * (top + 1) + q].to_string(),
                            |x| crate::exact::fmt_rational(&x),
                        ),
                    });
                };
                table.add(
                    Rational::from_integer(BigInt::from(p)),
                    Rational::from_integer(BigInt::from(q)),
                    dim,
                );
            }
        }
        Ok(table)
    }

    /// Locates the sector orbit containing the component of `Fix(g)` through `p`.
    ///
    /// Returns the sector index, orbit index and an element `w` with
    /// `w g w⁻¹ = rep` and `w` carrying that component onto the orbit
    /// representative, so that `s ↦ w s w⁻¹` maps its stabilizer into the
    /// representative's stabilizer.
    pub fn locate(&self, g: usize, p: &[Rational]) -> (usize, usize, usize) {
        let sectors = self.sectors();
        let class_index = self.group.class_index(g);
        let sector = &sectors[class_index];
        let rep = sector.class.representative;
        let t = self.group.conjugator(g, rep).expect("g lies in its class");
        let moved = self.act(t, p);
        let comp = sector
            .locus
            .component_of(&moved)
            .expect("conjugated point lies on the fixed locus of the representative");
        for (oi, orbit) in sector.orbits.iter().enumerate() {
            if !orbit.members.contains(&comp) {
                continue;
            }
            for &u in sector.centralizer.members() {
                let image = sector.locus.component_of(&self.act(u, &comp));
                if image.as_ref() == Some(&orbit.representative) {
                    return (class_index, oi, self.group.mul(u, t));
                }
            }
        }
        unreachable!("every component belongs to some orbit of its sector")
    }
}

/// Closes a set of invertible matrices under multiplication. Elements are
/// listed in breadth-first order from the identity; returns the Cayley table
/// group together with one matrix per element.
pub fn close_matrix_group(
    generators: &[CycMatrix],
    limit: usize,
) -> Result<(FiniteGroup, Vec<CycMatrix>), OrbifoldError> {
    let n = generators.first().map_or(0, CycMatrix::rows);
    let level = generators.iter().fold(1, |l, m| lcm_level(l, m.level()));
    let gens: Vec<CycMatrix> = generators.iter().map(|m| m.embed(level)).collect();
    if let Some(g) = gens.iter().position(|m| m.rows() != n || m.cols() != n) {
        return Err(OrbifoldError::ShapeMismatch { element: g, dim: n });
    }
    let mut elements = vec![CycMatrix::identity(n, level)];
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            let next = &elements[i] * g;
            if !elements.contains(&next) {
                if elements.len() == limit {
                    return Err(OrbifoldError::GroupTooLarge(limit));
                }
                elements.push(next);
            }
        }
        i += 1;
    }
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let ab = a * b;
                    elements
                        .iter()
                        .position(|c| *c == ab)
                        .expect("closure is multiplicatively closed")
                })
                .collect()
        })
        .collect();
    let group = FiniteGroup::from_table(&table).expect("a matrix group is a group");
    Ok((group, elements))
}
