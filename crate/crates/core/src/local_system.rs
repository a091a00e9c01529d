//! Inner local systems: one flat line bundle per sector component orbit,
//! modelled as a character of the orbit's stabilizer.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exact::{fmt_rational, Phase, Rational};
use crate::group::{Character, FiniteGroup, Subgroup};
use crate::hodge::{BettiTable, HodgeTable};
use crate::quotient::{GlobalQuotient, OrbifoldError, Point};
use crate::torsion::{twisted_character, Cocycle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSystemError {
    #[error("no component orbit {orbit} in sector {class}")]
    UnknownOrbit { class: usize, orbit: usize },
    #[error("point [{point}] does not lie on the fixed locus of sector {class}")]
    PointNotOnLocus { class: usize, point: String },
    #[error("character on sector {class}, orbit {orbit} is not defined on exactly the stabilizer")]
    WrongDomain { class: usize, orbit: usize },
    #[error("character on sector {class}, orbit {orbit} is not a homomorphism at ({h}, {k})")]
    NotHomomorphism {
        class: usize,
        orbit: usize,
        h: usize,
        k: usize,
    },
    #[error("character values on sector {class}, orbit {orbit} do not determine a character of the stabilizer")]
    Underdetermined { class: usize, orbit: usize },
}

/// Characters keyed by `(sector index, orbit index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerLocalSystem {
    assignments: BTreeMap<(usize, usize), Character>,
}

/// A failed condition together with the data that exhibits it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: u8,
    /// Defining elements: the sector representative, or the commuting triple.
    pub elements: Vec<usize>,
    pub point: Point,
    /// Stabilizer element at which the condition fails.
    pub element: usize,
    /// The phase that should have been zero.
    pub value: Phase,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let elements: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        let point: Vec<String> = self.point.iter().map(fmt_rational).collect();
        write!(
            f,
            "axiom ({}) fails for ({}) at point [{}]: element {} has phase {}",
            self.axiom,
            elements.join(","),
            point.join(", "),
            self.element,
            self.value
        )
    }
}

/// All characters trivial.
pub fn trivial_system(q: &GlobalQuotient) -> InnerLocalSystem {
    let mut assignments = BTreeMap::new();
    for (ci, s) in q.sectors().iter().enumerate() {
        for (oi, o) in s.orbits.iter().enumerate() {
            assignments.insert((ci, oi), Character::trivial(&o.stabilizer));
        }
    }
    InnerLocalSystem { assignments }
}

/// The local system induced by a discrete torsion cocycle: on every orbit of
/// sector `(g)`, the twisted character `h ↦ γ(α)_{g,h}` restricted to the stabilizer.
pub fn from_cocycle(q: &GlobalQuotient, alpha: &Cocycle) -> InnerLocalSystem {
    let mut assignments = BTreeMap::new();
    for (ci, s) in q.sectors().iter().enumerate() {
        let chi = twisted_character(q.group(), alpha, s.class.representative);
        for (oi, o) in s.orbits.iter().enumerate() {
            let restricted = chi
                .restrict(&o.stabilizer)
                .expect("orbit stabilizers lie in the centralizer");
            assignments.insert((ci, oi), restricted);
        }
    }
    InnerLocalSystem { assignments }
}

/// Extends values given on some stabilizer elements (typically generators)
/// to a character on the whole stabilizer.
pub fn extend_character(
    group: &FiniteGroup,
    stabilizer: &Subgroup,
    partial: &BTreeMap<usize, Phase>,
) -> Option<Character> {
    let mut values: BTreeMap<usize, Phase> = BTreeMap::from([(group.identity(), Phase::zero())]);
    for (&g, v) in partial {
        if !stabilizer.contains(g) {
            return None;
        }
        if let Some(old) = values.insert(g, v.clone()) {
            if old != *v {
                return None;
            }
        }
    }
    let mut frontier: Vec<usize> = values.keys().copied().collect();
    while let Some(x) = frontier.pop() {
        let known: Vec<(usize, Phase)> = values.iter().map(|(&k, v)| (k, v.clone())).collect();
        for (y, vy) in known {
            let z = group.mul(x, y);
            let vz = &values[&x] + &vy;
            match values.get(&z) {
                Some(old) if *old != vz => return None,
                Some(_) => {}
                None => {
                    values.insert(z, vz);
                    frontier.push(z);
                }
            }
        }
    }
    let chi = Character::from_values(values);
    (chi.domain() == stabilizer.members() && chi.homomorphism_violation(group).is_none())
        .then_some(chi)
}

impl InnerLocalSystem {
    /// Builds a system from explicit characters; orbits not mentioned get the
    /// trivial character.
    pub fn new(
        q: &GlobalQuotient,
        given: BTreeMap<(usize, usize), Character>,
    ) -> Result<Self, LocalSystemError> {
        let mut assignments = trivial_system(q).assignments;
        for ((class, orbit), chi) in given {
            let Some(o) = q.sectors().get(class).and_then(|s| s.orbits.get(orbit)) else {
                return Err(LocalSystemError::UnknownOrbit { class, orbit });
            };
            if chi.domain() != o.stabilizer.members() {
                return Err(LocalSystemError::WrongDomain { class, orbit });
            }
            if let Some((h, k)) = chi.homomorphism_violation(q.group()) {
                return Err(LocalSystemError::NotHomomorphism { class, orbit, h, k });
            }
            assignments.insert((class, orbit), chi);
        }
        Ok(InnerLocalSystem { assignments })
    }

    pub fn assignments(&self) -> &BTreeMap<(usize, usize), Character> {
        &self.assignments
    }

    pub fn character(&self, class: usize, orbit: usize) -> &Character {
        &self.assignments[&(class, orbit)]
    }

    pub fn is_trivial(&self) -> bool {
        self.assignments.values().all(Character::is_trivial)
    }
}

/// Index of the orbit in sector `class` containing the component through `point`.
pub fn orbit_of_point(
    q: &GlobalQuotient,
    class: usize,
    point: &[Rational],
) -> Result<usize, LocalSystemError> {
    let show = || point.iter().map(fmt_rational).collect::<Vec<_>>().join(", ");
    let sector = q.sectors().get(class).ok_or(LocalSystemError::UnknownOrbit { class, orbit: 0 })?;
    let dims_match = point.len() == sector.locus.directions().len() + sector.locus.elementary_divisors().len();
    let comp = dims_match
        .then(|| sector.locus.component_of(point))
        .flatten()
        .ok_or_else(|| LocalSystemError::PointNotOnLocus { class, point: show() })?;
    Ok(sector
        .orbits
        .iter()
        .position(|o| o.members.contains(&comp))
        .expect("every component lies in an orbit"))
}

/// Checks the three conditions on an inner local system: triviality on the
/// nontwisted sector, `I*L_(g⁻¹) = L_(g)⁻¹`, and triviality of the tensor
/// product of pulled-back bundles over every commuting triple with product one.
pub fn verify(q: &GlobalQuotient, l: &InnerLocalSystem) -> VerificationReport {
    let group = q.group();
    let sectors = q.sectors();
    let mut violations = Vec::new();

    for (oi, o) in sectors[0].orbits.iter().enumerate() {
        if let Some((&h, v)) = l.character(0, oi).values().iter().find(|(_, v)| !v.is_zero()) {
            violations.push(Violation {
                axiom: 1,
                elements: vec![group.identity()],
                point: o.representative.clone(),
                element: h,
                value: v.clone(),
            });
        }
    }

    for (ci, s) in sectors.iter().enumerate() {
        let g = s.class.representative;
        for (oi, o) in s.orbits.iter().enumerate() {
            let (cj, oj, w) = q.locate(group.inv(g), &o.representative);
            let chi = l.character(ci, oi);
            let chi_inv = l.character(cj, oj);
            for &h in o.stabilizer.members() {
                let value = chi.get(h).expect("defined on the stabilizer")
                    + chi_inv
                        .get(group.conjugate(w, h))
                        .expect("transport lands in the stabilizer");
                if !value.is_zero() {
                    violations.push(Violation {
                        axiom: 2,
                        elements: vec![g],
                        point: o.representative.clone(),
                        element: h,
                        value,
                    });
                    break;
                }
            }
        }
    }

    for triple in group.tuple_classes(3, true) {
        let locus = q
            .fixed_locus(&triple)
            .expect("tuple classes are commuting");
        let centralizer = group.centralizer(&triple);
        for o in q.component_orbits(&locus, &centralizer) {
            let pulled: Vec<(&Character, usize)> = triple
                .iter()
                .map(|&g| {
                    let (c, oi, w) = q.locate(g, &o.representative);
                    (l.character(c, oi), w)
                })
                .collect();
            for &h in o.stabilizer.members() {
                let value: Phase = pulled
                    .iter()
                    .map(|(chi, w)| {
                        chi.get(group.conjugate(*w, h))
                            .expect("transport lands in the stabilizer")
                            .clone()
                    })
                    .sum();
                if !value.is_zero() {
                    violations.push(Violation {
                        axiom: 3,
                        elements: triple.clone(),
                        point: o.representative.clone(),
                        element: h,
                        value,
                    });
                    break;
                }
            }
        }
    }
    VerificationReport { violations }
}

/// Orbifold Hodge numbers with coefficients in `l`, together with the
/// corresponding Betti numbers.
pub fn orbifold_hodge(
    q: &GlobalQuotient,
    l: &InnerLocalSystem,
) -> Result<(HodgeTable, BettiTable), OrbifoldError> {
    let mut total = HodgeTable::new();
    for (ci, s) in q.sectors().iter().enumerate() {
        for oi in 0..s.orbits.len() {
            let h = q.orbit_hodge(s, oi, l.character(ci, oi))?;
            total.merge(&h.shifted(&s.iota));
        }
    }
    let betti = total.betti();
    Ok((total, betti))
}
