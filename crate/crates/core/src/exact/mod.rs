//! Exact arithmetic substrate: rationals, ℚ/ℤ phases, cyclotomic fields,
//! linear algebra over them, and integer Smith normal form.

pub mod cyclotomic;
pub mod matrix;
pub mod rational;
pub mod snf;

pub use cyclotomic::{lcm_level, totient, Cyclotomic};
pub use matrix::{CycMatrix, CycVector};
pub use rational::{fmt_rational, int, rat, Phase, Rational};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
