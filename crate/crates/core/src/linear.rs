//! Linear orbifolds `ℂⁿ/G`: sectors, degree shifts, twisted cohomology
//! grading and the twisted orbifold cup product.

use std::collections::BTreeMap;

use crate::exact::{CycMatrix, Cyclotomic, Rational};
use crate::group::FiniteGroup;
use crate::quotient::{GlobalQuotient, OrbifoldError, Sector, SpaceKind};
use crate::torsion::{is_alpha_regular, Cocycle};

/// A finite group acting linearly on ℂⁿ through exact cyclotomic matrices.
#[derive(Clone, Debug)]
pub struct LinearOrbifold {
    quotient: GlobalQuotient,
}

/// Formal non-negative integer combination of conjugacy classes, keyed by class index.
pub type ClassCombination = BTreeMap<usize, u64>;

/// Structure constants of the orbifold product on α-regular sector classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRing {
    /// α-regular class indices with their degree shifting numbers.
    pub generators: Vec<(usize, Rational)>,
    /// `(i, j) ↦ x_i ∪ x_j`; zero products are stored as empty combinations.
    pub products: BTreeMap<(usize, usize), ClassCombination>,
}

/// Checks that `matrices[g]` is a representation of `group` on ℂⁿ.
pub fn validate_linear(
    group: FiniteGroup,
    matrices: Vec<CycMatrix>,
) -> Result<LinearOrbifold, OrbifoldError> {
    let n = matrices.first().map_or(0, CycMatrix::rows);
    let empty = vec![crate::exact::IntMatrix::zeros(0, 0); matrices.len()];
    let quotient = GlobalQuotient::build(group, n, matrices, empty, SpaceKind::Linear)?;
    Ok(LinearOrbifold { quotient })
}

impl LinearOrbifold {
    pub fn quotient(&self) -> &GlobalQuotient {
        &self.quotient
    }

    pub fn group(&self) -> &FiniteGroup {
        self.quotient.group()
    }

    pub fn dim(&self) -> usize {
        self.quotient.complex_dim()
    }

    /// Whether every element has determinant one.
    pub fn is_special_linear(&self) -> bool {
        self.group()
            .elements()
            .all(|g| self.quotient.rep(g).determinant().is_one())
    }

    pub fn degree_shift(&self, g: usize) -> Rational {
        self.quotient.degree_shift(g)
    }

    pub fn sectors(&self) -> &[Sector] {
        self.quotient.sectors()
    }

    /// Dimension of each graded piece: one generator per α-regular class in
    /// degree `ι` of that class.
    pub fn twisted_cohomology(&self, alpha: &Cocycle) -> BTreeMap<Rational, usize> {
        let mut out = BTreeMap::new();
        for s in self.sectors() {
            if is_alpha_regular(self.group(), alpha, s.class.representative) {
                *out.entry(s.iota.clone()).or_insert(0) += 1;
            }
        }
        out
    }

    fn fixed_dim(&self, elements: &[usize]) -> usize {
        let n = self.dim();
        let level = self.quotient.level();
        let mut stacked = CycMatrix::zeros(0, n, level);
        for &g in elements {
            stacked = stacked.vstack(&(self.quotient.rep(g) - &CycMatrix::identity(n, level)));
        }
        n - stacked.rank()
    }

    /// The orbifold product on sectors of α-regular classes.
    ///
    /// For classes `(g₁), (g₂)` the pairs `(h₁, h₂) ∈ (g₁) × (g₂)` are taken up
    /// to simultaneous conjugation. A pair contributes `d · x_(h₁h₂)` when
    /// `ι(h₁h₂) = ι(h₁) + ι(h₂)`, `X_{h₁} ∩ X_{h₂} = X_{h₁h₂}` and `h₁h₂` is
    /// α-regular, where `d = [C(h₁h₂) : C(h₁) ∩ C(h₂)]`.
    pub fn ring(&self, alpha: &Cocycle) -> LinearRing {
        let group = self.group();
        let sectors = self.sectors();
        let regular: Vec<usize> = sectors
            .iter()
            .filter(|s| is_alpha_regular(group, alpha, s.class.representative))
            .map(|s| s.class_index)
            .collect();
        let mut products = BTreeMap::new();
        for &i in &regular {
            for &j in &regular {
                let g1 = sectors[i].class.representative;
                let c1 = &sectors[i].centralizer;
                let mut combination = ClassCombination::new();
                let mut seen = Vec::new();
                for &h2 in &sectors[j].class.members {
                    if seen.contains(&h2) {
                        continue;
                    }
                    seen.extend(c1.members().iter().map(|&c| group.conjugate(c, h2)));
                    let k = group.mul(g1, h2);
                    let graded = self.degree_shift(k) == &sectors[i].iota + &sectors[j].iota;
                    if !graded
                        || self.fixed_dim(&[g1, h2]) != self.fixed_dim(&[k])
                        || !is_alpha_regular(group, alpha, k)
                    {
                        continue;
                    }
                    let d = group.centralizer(&[k]).order() / group.centralizer(&[g1, h2]).order();
                    *combination.entry(group.class_index(k)).or_insert(0) += d as u64;
                }
                products.insert((i, j), combination);
            }
        }
        LinearRing {
            generators: regular
                .iter()
                .map(|&i| (i, sectors[i].iota.clone()))
                .collect(),
            products,
        }
    }
}

impl LinearRing {
    pub fn product(&self, i: usize, j: usize) -> &ClassCombination {
        &self.products[&(i, j)]
    }

    /// Bilinear extension of the product to combinations.
    pub fn multiply(&self, a: &ClassCombination, b: &ClassCombination) -> ClassCombination {
        let mut out = ClassCombination::new();
        for (&i, &x) in a {
            for (&j, &y) in b {
                for (&k, &z) in self.product(i, j) {
                    *out.entry(k).or_insert(0) += x * y * z;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    pub fn basis(&self, i: usize) -> ClassCombination {
        ClassCombination::from([(i, 1)])
    }

    /// First basis triple with `(xᵢxⱼ)xₖ ≠ xᵢ(xⱼxₖ)`, if any.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let idx: Vec<usize> = self.generators.iter().map(|(i, _)| *i).collect();
        for &i in &idx {
            for &j in &idx {
                for &k in &idx {
                    let left = self.multiply(&self.multiply(&self.basis(i), &self.basis(j)), &self.basis(k));
                    let right = self.multiply(&self.basis(i), &self.multiply(&self.basis(j), &self.basis(k)));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// First product term `x_k` in `xᵢ ∪ xⱼ` with `ι_k ≠ ι_i + ι_j`, if any.
    pub fn grading_violation(&self) -> Option<(usize, usize, usize)> {
        let iota: BTreeMap<usize, &Rational> =
            self.generators.iter().map(|(i, q)| (*i, q)).collect();
        self.products.iter().find_map(|(&(i, j), comb)| {
            comb.keys()
                .find(|k| iota[k] != &(iota[&i] + iota[&j]))
                .map(|&k| (i, j, k))
        })
    }
}

/// `det(rep(g))` for reporting.
pub fn determinant(x: &LinearOrbifold, g: usize) -> Cyclotomic {
    x.quotient.rep(g).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::torsion::abelian_cocycle;

    fn diag(level: u32, exps: &[i64]) -> CycMatrix {
        CycMatrix::diagonal(&exps.iter().map(|&k| Cyclotomic::zeta_pow(level, k)).collect::<Vec<_>>())
    }

    fn kappa_c3() -> LinearOrbifold {
        let k = diag(4, &[2, 1, 1]);
        let (g, m) = crate::quotient::close_matrix_group(&[k], 64).unwrap();
        validate_linear(g, m).unwrap()
    }

    #[test]
    fn kappa_shifts_and_sectors() {
        let x = kappa_c3();
        assert!(x.is_special_linear());
        let shifts: Vec<Rational> = x.sectors().iter().map(|s| s.iota.clone()).collect();
        let dims: Vec<usize> = x.sectors().iter().map(|s| s.locus.complex_dim()).collect();
        // elements in BFS order: 1, κ, κ², κ³
        assert_eq!(shifts, vec![int(0), int(1), int(1), int(2)]);
        assert_eq!(dims, vec![3, 0, 1, 0]);
        let h = x.twisted_cohomology(&Cocycle::trivial(x.group()));
        assert_eq!(h, BTreeMap::from([(int(0), 1), (int(1), 2), (int(2), 1)]));
    }

    #[test]
    fn z2_on_c2() {
        let (g, m) = crate::quotient::close_matrix_group(&[diag(2, &[1, 1])], 8).unwrap();
        let x = validate_linear(g, m).unwrap();
        assert_eq!(x.degree_shift(1), int(1));
        assert_eq!(x.sectors().len(), 2);
        assert_eq!(x.sectors()[0].locus.complex_dim(), 2);
    }

    #[test]
    fn not_a_homomorphism() {
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let m = vec![CycMatrix::identity(1, 1), diag(4, &[1])];
        assert_eq!(
            validate_linear(g, m).unwrap_err(),
            OrbifoldError::NotHomomorphism(1, 1)
        );
        let g = FiniteGroup::abelian(&[2]).unwrap();
        let m = vec![diag(2, &[1]), diag(2, &[1])];
        assert_eq!(validate_linear(g, m).unwrap_err(), OrbifoldError::NotIdentityAtOne);
    }

    #[test]
    fn ring_on_c4_z2z2() {
        let g = FiniteGroup::abelian(&[2, 2]).unwrap();
        let a = diag(2, &[1, 1, 0, 0]);
        let b = diag(2, &[0, 0, 1, 1]);
        let m = vec![CycMatrix::identity(4, 2), a.clone(), b.clone(), &a * &b];
        let x = validate_linear(g, m).unwrap();
        let r = x.ring(&Cocycle::trivial(x.group()));
        assert_eq!(r.product(1, 2), &ClassCombination::from([(3, 1)]));
        assert_eq!(r.product(0, 3), &ClassCombination::from([(3, 1)]));
        assert_eq!(r.product(1, 1), &ClassCombination::new());
        assert_eq!(r.associativity_violation(), None);
        assert_eq!(r.grading_violation(), None);
        let alpha = abelian_cocycle(&[2, 2], &[vec![0, 1], vec![0, 0]]).unwrap();
        let r = x.ring(&alpha);
        assert_eq!(r.generators, vec![(0, int(0))]);
        assert_eq!(x.twisted_cohomology(&alpha), BTreeMap::from([(int(0), 1)]));
    }

    #[test]
    fn class_algebra_on_a_point() {
        let s3 = crate::group::tests::s3();
        let m = vec![CycMatrix::identity(0, 1); 6];
        let x = validate_linear(s3, m).unwrap();
        let r = x.ring(&Cocycle::trivial(x.group()));
        // classes: identity, transpositions, 3-cycles
        assert_eq!(r.product(1, 1), &ClassCombination::from([(0, 3), (2, 3)]));
        assert_eq!(r.product(2, 2), &ClassCombination::from([(0, 2), (2, 1)]));
        assert_eq!(r.product(1, 2), &ClassCombination::from([(1, 2)]));
        assert_eq!(r.associativity_violation(), None);
    }
}
