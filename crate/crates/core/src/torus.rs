//! Torus orbifolds `T²ⁿ/G` with `T²ⁿ = ℂⁿ/Λ` and `G` acting linearly.

use crate::exact::{fmt_rational, lcm_level, CycMatrix, CycVector, Cyclotomic, IntMatrix};
use crate::group::FiniteGroup;
use crate::hodge::HodgeTable;
use crate::quotient::{FixedLocus, GlobalQuotient, OrbifoldError, Sector, SpaceKind};

#[derive(Clone, Debug)]
pub struct TorusOrbifold {
    quotient: GlobalQuotient,
    lattice: Vec<CycVector>,
}

/// Validates a linear action on ℂⁿ together with `2n` lattice generators and
/// derives the integral action on lattice coordinates.
pub fn validate_torus(
    group: FiniteGroup,
    matrices: Vec<CycMatrix>,
    lattice: Vec<CycVector>,
) -> Result<TorusOrbifold, OrbifoldError> {
    let n = matrices.first().map_or(0, CycMatrix::rows);
    if lattice.len() != 2 * n || lattice.iter().any(|v| v.len() != n) {
        return Err(OrbifoldError::WrongLatticeSize {
            expected: 2 * n,
            got: lattice.len(),
        });
    }
    let empty = vec![IntMatrix::zeros(0, 0); matrices.len()];
    let quotient = GlobalQuotient::build(group, n, matrices, empty, SpaceKind::Linear)?;

    let basis = CycMatrix::from_columns(&lattice, n);
    let level = lcm_level(quotient.level(), basis.level());
    let basis = basis.embed(level);
    let real_frame = basis.vstack(&basis.conj());
    if real_frame.determinant().is_zero() {
        return Err(OrbifoldError::DegenerateLattice);
    }

    let mut actions = Vec::with_capacity(quotient.group().order());
    for g in quotient.group().elements() {
        let a = quotient.rep(g).embed(level);
        let mut action = IntMatrix::zeros(2 * n, 2 * n);
        for (j, v) in lattice.iter().enumerate() {
            let image = a.mul_vec(v);
            let rhs: CycVector = image
                .iter()
                .cloned()
                .chain(image.iter().map(Cyclotomic::conj))
                .collect();
            let coords = real_frame
                .solve_unique(&rhs)
                .expect("a nondegenerate frame has a unique solution");
            let rational: Option<Vec<_>> = coords.iter().map(Cyclotomic::as_rational).collect();
            let integral = rational
                .as_ref()
                .filter(|c| c.iter().all(|x| x.is_integer()));
            let Some(integral) = integral else {
                let image = coords
                    .iter()
                    .map(|c| match c.as_rational() {
                        Some(q) => fmt_rational(&q),
                        None => c.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(OrbifoldError::LatticeNotPreserved {
                    element: g,
                    generator: j,
                    image,
                });
            };
            for (i, x) in integral.iter().enumerate() {
                action[(i, j)] = x.to_integer();
            }
        }
        actions.push(action);
    }
    Ok(TorusOrbifold {
        quotient: quotient.with_lattice_action(actions),
        lattice,
    })
}

impl TorusOrbifold {
    pub fn quotient(&self) -> &GlobalQuotient {
        &self.quotient
    }

    pub fn group(&self) -> &FiniteGroup {
        self.quotient.group()
    }

    pub fn cdim(&self) -> usize {
        self.quotient.complex_dim()
    }

    pub fn lattice(&self) -> &[CycVector] {
        &self.lattice
    }

    /// Action of `g` on lattice coordinates.
    pub fn int_rep(&self, g: usize) -> &IntMatrix {
        self.quotient.lattice_action(g)
    }

    /// Common fixed locus of a commuting tuple.
    pub fn fixed_locus(&self, elements: &[usize]) -> Result<FixedLocus, OrbifoldError> {
        self.quotient.fixed_locus(elements)
    }

    pub fn sector_inventory(&self) -> &[Sector] {
        self.quotient.sectors()
    }

    /// Hodge numbers of one sector orbit with coefficients in the character
    /// `chi` of its stabilizer, shifted by `(ι, ι)`.
    pub fn sector_hodge(
        &self,
        class_index: usize,
        orbit_index: usize,
        chi: &crate::group::Character,
    ) -> Result<HodgeTable, OrbifoldError> {
        let sector = &self.sector_inventory()[class_index];
        Ok(self
            .quotient
            .orbit_hodge(sector, orbit_index, chi)?
            .shifted(&sector.iota))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::group::Character;
    use crate::quotient::close_matrix_group;
    use num_bigint::BigInt;

    fn diag(level: u32, exps: &[i64]) -> CycMatrix {
        CycMatrix::diagonal(&exps.iter().map(|&k| Cyclotomic::zeta_pow(level, k)).collect::<Vec<_>>())
    }

    /// ℤ[i]ⁿ: generators e_k and i·e_k.
    fn gaussian_lattice(n: usize) -> Vec<CycVector> {
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

    fn torus(gens: &[CycMatrix], n: usize) -> TorusOrbifold {
        let (g, m) = close_matrix_group(gens, 64).unwrap();
        validate_torus(g, m, gaussian_lattice(n)).unwrap()
    }

    #[test]
    fn kummer_fixed_points() {
        let x = torus(&[diag(2, &[1, 1])], 2);
        let f = x.fixed_locus(&[1]).unwrap();
        assert_eq!(f.component_count(), BigInt::from(16));
        assert_eq!(f.complex_dim(), 0);
        assert_eq!(x.sector_inventory()[1].orbits.len(), 16);
        assert_eq!(x.sector_inventory()[1].iota, int(1));
    }

    #[test]
    fn reflection_on_t4() {
        let x = torus(&[diag(2, &[1, 0])], 2);
        let f = x.fixed_locus(&[1]).unwrap();
        assert_eq!(f.component_count(), BigInt::from(4));
        assert_eq!(f.complex_dim(), 1);
        assert_eq!(f.directions().len(), 2);
    }

    #[test]
    fn kappa_on_t6() {
        let x = torus(&[diag(4, &[2, 1, 1])], 3);
        // BFS order: 1, κ, κ², κ³
        let f = x.fixed_locus(&[1]).unwrap();
        assert_eq!((f.component_count(), f.complex_dim()), (BigInt::from(16), 0));
        let f = x.fixed_locus(&[2]).unwrap();
        assert_eq!((f.component_count(), f.complex_dim()), (BigInt::from(16), 1));
        let s = &x.sector_inventory()[2];
        let paired = s.orbits.iter().filter(|o| o.members.len() == 2).count();
        let fixed = s.orbits.iter().filter(|o| o.members.len() == 1).count();
        assert_eq!((paired, fixed), (6, 4));
        for o in &s.orbits {
            assert_eq!(o.members.len() * o.stabilizer.order(), 4);
        }
    }

    #[test]
    fn stabilizer_character_kills_or_keeps_forms() {
        let x = torus(&[diag(4, &[2, 1, 1])], 3);
        let s = &x.sector_inventory()[2];
        let oi = s.orbits.iter().position(|o| o.members.len() == 1).unwrap();
        let stab = &s.orbits[oi].stabilizer;
        let h = x.quotient().orbit_hodge(s, oi, &Character::trivial(stab)).unwrap();
        assert_eq!((h.get(&int(0), &int(0)), h.get(&int(1), &int(0)), h.get(&int(1), &int(1))), (1, 0, 1));
        let odd: std::collections::BTreeMap<_, _> = stab
            .members()
            .iter()
            .map(|&g| (g, crate::exact::Phase::from_frac(if g % 2 == 1 { 1 } else { 0 }, 2)))
            .collect();
        let h = x.quotient().orbit_hodge(s, oi, &Character::from_values(odd)).unwrap();
        assert_eq!((h.get(&int(0), &int(0)), h.get(&int(1), &int(0)), h.get(&int(0), &int(1))), (0, 1, 1));
    }

    #[test]
    fn lattice_must_be_preserved() {
        let (g, m) = close_matrix_group(&[diag(4, &[1])], 8).unwrap();
        let two_i = Cyclotomic::zeta_pow(4, 1) + Cyclotomic::zeta_pow(4, 1);
        let lattice = vec![vec![Cyclotomic::one(4)], vec![two_i]];
        assert_eq!(
            validate_torus(g, m, lattice).unwrap_err(),
            OrbifoldError::LatticeNotPreserved {
                element: 1,
                generator: 0,
                image: "0, 1/2".into()
            }
        );
        let (g, m) = close_matrix_group(&[diag(2, &[1])], 8).unwrap();
        let real = vec![vec![Cyclotomic::one(1)], vec![Cyclotomic::from_int(1, 2)]];
        assert_eq!(
            validate_torus(g, m, real).unwrap_err(),
            OrbifoldError::DegenerateLattice
        );
    }
}
