//! Discrete torsion: normalized 2-cocycles with values in ℚ/ℤ, their phases
//! and twisted characters, α-regular classes, abelian Schur multipliers and
//! centers of twisted group algebras.
//!
//! All cocycles are written additively: the stored phase `q` stands for the
//! root of unity `e^{2πiq}`.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::exact::{rat, CycMatrix, Cyclotomic, Phase};
use crate::group::{abelian_coords, Character, ConjClass, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error("cocycle table has shape {rows}x{cols}, expected {order}x{order}")]
    WrongShape {
        rows: usize,
        cols: usize,
        order: usize,
    },
    #[error("NotNormalized: α(1,{0}) or α({0},1) is nonzero")]
    NotNormalized(usize),
    #[error("CocycleIdentityFailed: α(g,hk)+α(h,k) != α(g,h)+α(gh,k) at (g,h,k) = ({0},{1},{2})")]
    CocycleIdentityFailed(usize, usize, usize),
    #[error("RhoNotNormalized: ρ(1) = {0}, expected 0")]
    RhoNotNormalized(Phase),
    #[error("CoefficientOutOfRange: c[{i}][{j}] = {value} must lie in [0, {bound})")]
    CoefficientOutOfRange {
        i: usize,
        j: usize,
        value: u64,
        bound: u64,
    },
}

/// A normalized 2-cocycle `α : G × G → ℚ/ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    order: usize,
    table: Vec<Phase>,
}

pub type TwistedCharacter = Character;

impl Cocycle {
    pub fn trivial(group: &FiniteGroup) -> Self {
        Cocycle {
            order: group.order(),
            table: vec![Phase::zero(); group.order() * group.order()],
        }
    }

    /// Validates normalization and the cocycle identity on every triple.
    pub fn new(group: &FiniteGroup, rows: Vec<Vec<Phase>>) -> Result<Self, TorsionError> {
        let n = group.order();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(TorsionError::WrongShape {
                rows: rows.len(),
                cols: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
                order: n,
            });
        }
        let c = Cocycle {
            order: n,
            table: rows.into_iter().flatten().collect(),
        };
        let e = group.identity();
        if let Some(g) = group
            .elements()
            .find(|&g| !c.get(e, g).is_zero() || !c.get(g, e).is_zero())
        {
            return Err(TorsionError::NotNormalized(g));
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for k in group.elements() {
                    let lhs = c.get(g, group.mul(h, k)) + c.get(h, k);
                    let rhs = c.get(g, h) + c.get(gh, k);
                    if lhs != rhs {
                        return Err(TorsionError::CocycleIdentityFailed(g, h, k));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, g: usize, h: usize) -> &Phase {
        &self.table[g * self.order + h]
    }

    pub fn rows(&self) -> Vec<Vec<Phase>> {
        self.table.chunks(self.order).map(<[Phase]>::to_vec).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(Phase::is_zero)
    }

    /// Pointwise sum, i.e. the product of the corresponding U(1)-valued cocycles.
    pub fn add(&self, other: &Cocycle) -> Cocycle {
        assert_eq!(self.order, other.order);
        Cocycle {
            order: self.order,
            table: self.table.iter().zip(&other.table).map(|(a, b)| a + b).collect(),
        }
    }

    /// Least common multiple of all value denominators.
    pub fn level(&self) -> u32 {
        crate::exact::rational::common_level(&self.table)
    }
}

/// `(δρ)(g,h) = ρ(g) + ρ(h) − ρ(gh)`.
pub fn coboundary(group: &FiniteGroup, rho: &[Phase]) -> Result<Cocycle, TorsionError> {
    assert_eq!(rho.len(), group.order(), "ρ must assign a phase to every element");
    let e = group.identity();
    if !rho[e].is_zero() {
        return Err(TorsionError::RhoNotNormalized(rho[e].clone()));
    }
    let rows = group
        .elements()
        .map(|g| {
            group
                .elements()
                .map(|h| &(&rho[g] + &rho[h]) - &rho[group.mul(g, h)])
                .collect()
        })
        .collect();
    Cocycle::new(group, rows)
}

/// Phase table `γ(g,h) = α(g,h) − α(h,g)`, indexed `[g][h]`.
pub fn phase(alpha: &Cocycle) -> Vec<Vec<Phase>> {
    let n = alpha.order();
    (0..n)
        .map(|g| (0..n).map(|h| alpha.get(g, h) - alpha.get(h, g)).collect())
        .collect()
}

/// The α-twisted character `h ↦ γ(g,h)` on the centralizer of `g`.
pub fn twisted_character(group: &FiniteGroup, alpha: &Cocycle, g: usize) -> TwistedCharacter {
    let values = group
        .centralizer(&[g])
        .members()
        .iter()
        .map(|&h| (h, alpha.get(g, h) - alpha.get(h, g)))
        .collect();
    Character::from_values(values)
}

pub fn is_alpha_regular(group: &FiniteGroup, alpha: &Cocycle, g: usize) -> bool {
    twisted_character(group, alpha, g).is_trivial()
}

/// Conjugacy classes on which the twisted character is trivial.
pub fn alpha_regular_classes(group: &FiniteGroup, alpha: &Cocycle) -> Vec<ConjClass> {
    group
        .conjugacy_classes()
        .iter()
        .filter(|c| is_alpha_regular(group, alpha, c.representative))
        .cloned()
        .collect()
}

/// Invariant factors of H²(ℤ/n₁ × … × ℤ/n_r, U(1)): the pairwise gcds, with 1's dropped.
pub fn abelian_h2(invariants: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 0..invariants.len() {
        for j in i + 1..invariants.len() {
            let g = invariants[i].gcd(&invariants[j]);
            if g > 1 {
                out.push(g);
            }
        }
    }
    out
}

/// The bilinear cocycle `α(a,b) = Σ_{i<j} c_ij a_i b_j / gcd(n_i, n_j)` on the
/// abelian group with the given invariants (mixed-radix element encoding).
pub fn abelian_cocycle(invariants: &[u64], coeffs: &[Vec<u64>]) -> Result<Cocycle, TorsionError> {
    let r = invariants.len();
    let group = FiniteGroup::abelian(invariants).expect("invariants must be positive");
    let c = |i: usize, j: usize| coeffs.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0);
    for i in 0..coeffs.len() {
        for j in 0..coeffs[i].len() {
            let bound = if i < j && j < r {
                invariants[i].gcd(&invariants[j])
            } else {
                1
            };
            if c(i, j) >= bound {
                return Err(TorsionError::CoefficientOutOfRange {
                    i,
                    j,
                    value: c(i, j),
                    bound,
                });
            }
        }
    }
    let n = group.order();
    let coords: Vec<Vec<u64>> = (0..n).map(|g| abelian_coords(invariants, g)).collect();
    let rows = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut total = Phase::zero();
                    for i in 0..r {
                        for j in i + 1..r {
                            let p = invariants[i].gcd(&invariants[j]);
                            let num = c(i, j) * coords[a][i] * coords[b][j];
                            total = &total + &Phase::new(rat(num as i64, p as i64));
                        }
                    }
                    total
                })
                .collect()
        })
        .collect();
    Cocycle::new(&group, rows)
}

/// Center of the twisted group algebra `ℂ_α[G]`, with `e_g e_h = e^{2πiα(g,h)} e_{gh}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCenter {
    pub dimension: usize,
    pub level: u32,
    pub basis_classes: Vec<ConjClass>,
    /// Coefficients on `e_0, …, e_{n−1}` of each basis element; 1 on the class representative.
    pub basis: Vec<Vec<Cyclotomic>>,
    /// `z_i z_j = Σ_k c[(i,j,k)] z_k`; zero constants omitted.
    pub structure_constants: BTreeMap<(usize, usize, usize), Cyclotomic>,
}

impl TwistedCenter {
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Cyclotomic {
        self.structure_constants
            .get(&(i, j, k))
            .cloned()
            .unwrap_or_else(|| Cyclotomic::zero(self.level))
    }
}

fn twisted_product(
    group: &FiniteGroup,
    weights: &[Cyclotomic],
    a: &[Cyclotomic],
    b: &[Cyclotomic],
    level: u32,
) -> Vec<Cyclotomic> {
    let n = group.order();
    let mut out = vec![Cyclotomic::zero(level); n];
    for g in 0..n {
        if a[g].is_zero() {
            continue;
        }
        for h in 0..n {
            if b[h].is_zero() {
                continue;
            }
            let t = &(&a[g] * &b[h]) * &weights[g * n + h];
            let gh = group.mul(g, h);
            out[gh] = &out[gh] + &t;
        }
    }
    out
}

/// Computes the center by solving `e_h z = z e_h` class by class; a class
/// supports a central element exactly when it is α-regular.
pub fn twisted_center(group: &FiniteGroup, alpha: &Cocycle) -> TwistedCenter {
    let n = group.order();
    let level = alpha.level();
    let weights: Vec<Cyclotomic> = (0..n)
        .flat_map(|g| (0..n).map(move |h| (g, h)))
        .map(|(g, h)| Cyclotomic::from_phase(level, alpha.get(g, h)))
        .collect();
    let w = |g: usize, h: usize| &weights[g * n + h];

    let mut basis_classes = Vec::new();
    let mut basis = Vec::new();
    for class in group.conjugacy_classes() {
        let s = class.size();
        let mut m = CycMatrix::zeros(n * n, s, level);
        for h in group.elements() {
            for (col, &g) in class.members.iter().enumerate() {
                let hg = group.mul(h, g);
                let gh = group.mul(g, h);
                let r1 = h * n + hg;
                m[(r1, col)] = &m[(r1, col)] + w(h, g);
                let r2 = h * n + gh;
                m[(r2, col)] = &m[(r2, col)] - w(g, h);
            }
        }
        let kernel = m.kernel_basis();
        debug_assert!(kernel.len() <= 1);
        if let Some(v) = kernel.into_iter().next() {
            let scale = v[0].inv().expect("central element vanishes on its representative");
            let mut elem = vec![Cyclotomic::zero(level); n];
            for (col, &g) in class.members.iter().enumerate() {
                elem[g] = &v[col] * &scale;
            }
            basis_classes.push(class.clone());
            basis.push(elem);
        }
    }

    let mut structure_constants = BTreeMap::new();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let prod = twisted_product(group, &weights, &basis[i], &basis[j], level);
            let mut rest = prod.clone();
            for (k, class) in basis_classes.iter().enumerate() {
                let c = prod[class.representative].clone();
                if c.is_zero() {
                    continue;
                }
                for g in 0..n {
                    rest[g] = &rest[g] - &(&c * &basis[k][g]);
                }
                structure_constants.insert((i, j, k), c);
            }
            assert!(
                rest.iter().all(Cyclotomic::is_zero),
                "product of central elements left the span of the class basis"
            );
        }
    }

    TwistedCenter {
        dimension: basis.len(),
        level,
        basis_classes,
        basis,
        structure_constants,
    }
}
