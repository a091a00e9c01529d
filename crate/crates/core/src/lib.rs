//! Exact computation of orbifold cohomology for global quotients `ℂⁿ/G` and
//! `T²ⁿ/G`, untwisted or twisted by discrete torsion and inner local systems.

pub mod exact;
pub mod group;
pub mod hodge;
pub mod linear;
pub mod local_system;
pub mod quotient;
pub mod torsion;
pub mod torus;

pub use group::{Character, ConjClass, FiniteGroup, GroupError, Subgroup};
pub use hodge::{duality_check, BettiTable, HodgeTable};
pub use local_system::{
    from_cocycle, orbifold_hodge, trivial_system, verify, InnerLocalSystem, LocalSystemError,
    VerificationReport, Violation,
};
pub use linear::{validate_linear, LinearOrbifold, LinearRing};
pub use quotient::{
    close_matrix_group, ComponentOrbit, FixedLocus, GlobalQuotient, OrbifoldError, Sector,
    SpaceKind,
};
pub use torsion::{Cocycle, TorsionError, TwistedCenter};
pub use torus::{validate_torus, TorusOrbifold};
