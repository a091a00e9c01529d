#![allow(dead_code)]

use std::collections::BTreeMap;

use orbicoh_core::exact::{CycMatrix, CycVector, Cyclotomic, Phase};
use orbicoh_core::{close_matrix_group, validate_torus, Character, InnerLocalSystem, TorusOrbifold};

pub fn diag(level: u32, exps: &[i64]) -> CycMatrix {
    CycMatrix::diagonal(
        &exps
            .iter()
            .map(|&k| Cyclotomic::zeta_pow(level, k))
            .collect::<Vec<_>>(),
    )
}

/// ℤ[i]ⁿ with generators e_k, i·e_k.
pub fn gaussian_lattice(n: usize) -> Vec<CycVector> {
    let mut out = Vec::new();
    for k in 0..n {
        for unit in [Cyclotomic::one(4), Cyclotomic::zeta_pow(4, 1)] {
            let mut v = vec![Cyclotomic::zero(4); n];
            v[k] = unit;
            out.push(v);
        }
    }
    out
}

pub fn torus(gens: &[CycMatrix], n: usize) -> TorusOrbifold {
    let (g, m) = close_matrix_group(gens, 64).unwrap();
    validate_torus(g, m, gaussian_lattice(n)).unwrap()
}

pub fn kummer() -> TorusOrbifold {
    torus(&[diag(2, &[1, 1])], 2)
}

/// Elements in closure order: 1, g, h, gh.
pub fn t4_z2z2() -> TorusOrbifold {
    torus(&[diag(2, &[1, 0]), diag(2, &[0, 1])], 2)
}

/// Elements in closure order: 1, κ, κ², κ³.
pub fn t6_z4() -> TorusOrbifold {
    torus(&[diag(4, &[2, 1, 1])], 3)
}

pub const KAPPA: usize = 1;

fn power_character(x: &TorusOrbifold, members: &[usize], value_at_kappa: Phase) -> Character {
    let g = x.group();
    Character::from_values(
        members
            .iter()
            .map(|&h| {
                let k = (0..4).find(|&k| g.power(KAPPA, k) == h).unwrap();
                (h, value_at_kappa.scale(k as i64))
            })
            .collect(),
    )
}

/// The system with χ(κ) = 1/2 on the first `4 − k` S²-orbits of sector (κ²)
/// and, when `dress_points`, χ(κ) = ±1/4 at the fixed points of κ and κ³ lying
/// on those orbits.
pub fn l_k(x: &TorusOrbifold, k: usize, dress_points: bool) -> InnerLocalSystem {
    let q = x.quotient();
    let sectors = q.sectors();
    let k2 = q.group().class_index(q.group().power(KAPPA, 2));
    let special: Vec<usize> = sectors[k2]
        .orbits
        .iter()
        .enumerate()
        .filter(|(_, o)| o.members.len() == 1)
        .map(|(i, _)| i)
        .take(4 - k)
        .collect();
    let mut given = BTreeMap::new();
    for &oi in &special {
        let o = &sectors[k2].orbits[oi];
        given.insert((k2, oi), power_character(x, o.stabilizer.members(), Phase::from_frac(1, 2)));
    }
    if dress_points {
        for (power, value) in [(1, Phase::from_frac(1, 4)), (3, Phase::from_frac(3, 4))] {
            let ci = q.group().class_index(q.group().power(KAPPA, power));
            for (oi, o) in sectors[ci].orbits.iter().enumerate() {
                let comp = sectors[k2].locus.component_of(&o.representative).unwrap();
                if special.iter().any(|&s| sectors[k2].orbits[s].members.contains(&comp)) {
                    given.insert((ci, oi), power_character(x, o.stabilizer.members(), value.clone()));
                }
            }
        }
    }
    InnerLocalSystem::new(q, given).unwrap()
}
