//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! An element of level `N` is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}`
//! reduced modulo the cyclotomic polynomial Φ_N, so equality is coefficientwise.
//! Operands of different levels are embedded into ℚ(ζ_lcm) first.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{fmt_rational, Phase, Rational};

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u32, Rc<Vec<Rational>>>> = RefCell::new(HashMap::new());
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Coefficients (constant term first) of the monic cyclotomic polynomial Φ_n.
pub fn cyclotomic_polynomial(n: u32) -> Rc<Vec<Rational>> {
    assert!(n >= 1, "cyclotomic level must be positive");
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![Rational::zero(); n as usize + 1];
    num[0] = -Rational::one();
    num[n as usize] = Rational::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        let (q, r) = poly_divrem(&num, &phi_d);
        debug_assert!(r.iter().all(Zero::is_zero));
        num = q;
    }
    let p = Rc::new(num);
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, p.clone()));
    p
}

/// Euler's totient, as the degree of Φ_n.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

pub fn lcm_level(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r: Vec<Rational> = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[shift + j] -= t;
        }
        q[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

/// Reduces an arbitrary-degree polynomial modulo the monic Φ_N, in place.
fn reduce_mod_phi(mut p: Vec<Rational>, phi: &[Rational]) -> Vec<Rational> {
    let d = phi.len() - 1;
    while p.len() > d {
        let top = p.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = p.len() - d;
        for (j, pj) in phi[..d].iter().enumerate() {
            if !pj.is_zero() {
                p[shift + j] -= &top * pj;
            }
        }
    }
    p.resize(d, Rational::zero());
    p
}

/// An element of ℚ(ζ_N).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn zero(level: u32) -> Self {
        Cyclotomic {
            level,
            coeffs: vec![Rational::zero(); totient(level)],
        }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, Rational::one())
    }

    pub fn from_rational(level: u32, q: Rational) -> Self {
        let mut c = Self::zero(level);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(level: u32, n: i64) -> Self {
        Self::from_rational(level, Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from power-basis coefficients of any length, reducing mod Φ_N.
    pub fn from_coeffs(level: u32, coeffs: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(level);
        Cyclotomic {
            level,
            coeffs: reduce_mod_phi(coeffs, &phi),
        }
    }

    /// ζ_N^k.
    pub fn zeta_pow(level: u32, k: i64) -> Self {
        let e = k.rem_euclid(i64::from(level)) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coeffs(level, v)
    }

    /// The root of unity `e^{2πi q}` at the smallest level containing it that `level` divides.
    pub fn from_phase(level: u32, q: &Phase) -> Self {
        let den = u32::try_from(q.value().denom().clone()).expect("phase order too large");
        let target = lcm_level(level, den);
        let k = q.value() * Rational::from_integer(BigInt::from(target));
        let k = i64::try_from(k.to_integer()).expect("exponent overflow");
        Self::zeta_pow(target, k)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Returns the rational value when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embeds into ℚ(ζ_target) via ζ_N ↦ ζ_target^{target/N}.
    pub fn embed(&self, target: u32) -> Cyclotomic {
        assert!(
            target % self.level == 0,
            "cannot embed level {} into level {}",
            self.level,
            target
        );
        if target == self.level {
            return self.clone();
        }
        let step = (target / self.level) as usize;
        let mut v = vec![Rational::zero(); step * (self.coeffs.len().max(1) - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Self::from_coeffs(target, v)
    }

    fn aligned(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let l = lcm_level(self.level, other.level);
        (self.embed(l), other.embed(l))
    }

    /// Complex conjugation ζ ↦ ζ^{N-1}.
    pub fn conj(&self) -> Cyclotomic {
        let n = self.level as usize;
        let mut v = vec![Rational::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(n - i) % n] += c;
        }
        Self::from_coeffs(self.level, v)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo Φ_N.
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        let phi = cyclotomic_polynomial(self.level);
        // invariant: s_i * a ≡ r_i (mod Φ)
        let mut r0: Vec<Rational> = phi.to_vec();
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ_N is irreducible
        let c = r1[0].clone();
        let s: Vec<Rational> = s1.into_iter().map(|x| x / &c).collect();
        Some(Self::from_coeffs(self.level, s))
    }

    pub fn pow(&self, mut e: u64) -> Cyclotomic {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Identifies `self` as a root of unity `e^{2πi q}` of order at most `order_bound`.
    ///
    /// Every root of unity in ℚ(ζ_N) is ±ζ_N^k, so it suffices to compare
    /// against the powers of ζ_{lcm(2,N)}.
    pub fn phase_of_root(&self, order_bound: u64) -> Option<Phase> {
        if self.is_zero() {
            return None;
        }
        let l = lcm_level(2, self.level);
        let me = self.embed(l);
        let z = Cyclotomic::zeta_pow(l, 1);
        let mut power = Cyclotomic::one(l);
        for k in 0..l {
            if power == me {
                let q = Phase::from_frac(i64::from(k), i64::from(l));
                let order = q.order();
                return (order <= BigInt::from(order_bound)).then_some(q);
            }
            power = &power * &z;
        }
        None
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => fmt_rational(c),
                1 => format!("{}*z{}", fmt_rational(c), self.level),
                _ => format!("{}*z{}^{}", fmt_rational(c), self.level, i),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        Cyclotomic {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a - &b;
        }
        Cyclotomic {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.level != rhs.level {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        if let Some(q) = rhs.as_rational() {
            return Cyclotomic {
                level: self.level,
                coeffs: self.coeffs.iter().map(|c| c * &q).collect(),
            };
        }
        Cyclotomic::from_coeffs(self.level, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
