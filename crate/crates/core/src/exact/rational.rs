//! Rationals and phases in ℚ/ℤ.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of ℚ/ℤ, read multiplicatively as the root of unity `e^{2πi q}`.
///
/// The stored representative always lies in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational);

impl Phase {
    pub fn new(q: Rational) -> Self {
        let floor = q.floor();
        Phase(q - floor)
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Phase::new(rat(num, den))
    }

    pub fn zero() -> Self {
        Phase(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Multiplicative order of the root of unity, i.e. the reduced denominator.
    pub fn order(&self) -> BigInt {
        self.0.denom().clone()
    }

    pub fn scale(&self, k: i64) -> Phase {
        Phase::new(&self.0 * BigInt::from(k))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl Add for &Phase {
    type Output = Phase;
    fn add(self, rhs: &Phase) -> Phase {
        Phase::new(&self.0 + &rhs.0)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        &self + &rhs
    }
}

impl Sub for &Phase {
    type Output = Phase;
    fn sub(self, rhs: &Phase) -> Phase {
        Phase::new(&self.0 - &rhs.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        &self - &rhs
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-&self.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        -&self
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::zero(), |a, b| a + b)
    }
}

/// Least common multiple of the denominators of a collection of phases.
pub fn common_level<'a>(phases: impl IntoIterator<Item = &'a Phase>) -> u32 {
    let l = phases
        .into_iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.0.denom()));
    u32::try_from(l.abs()).expect("phase denominators exceed supported cyclotomic level")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_representative() {
        assert_eq!(Phase::from_frac(5, 4), Phase::from_frac(1, 4));
        assert_eq!(Phase::from_frac(-1, 4), Phase::from_frac(3, 4));
        assert_eq!(Phase::from_frac(2, 2), Phase::zero());
        assert!(Phase::from_frac(-7, 3).value() >= &Rational::zero());
    }

    #[test]
    fn group_law() {
        let a = Phase::from_frac(1, 3);
        let b = Phase::from_frac(3, 4);
        assert_eq!(&a + &b, Phase::from_frac(1, 12));
        assert_eq!(&a + &(-&a), Phase::zero());
        assert_eq!(-Phase::from_frac(1, 4), Phase::from_frac(3, 4));
        assert_eq!(Phase::from_frac(1, 2).order(), BigInt::from(2));
        assert_eq!(common_level([&a, &b]), 12);
    }
}
