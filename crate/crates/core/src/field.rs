//! The prime field F_p.
//!
//! Residues are stored as `u32` in `0..p`; products are formed in `u64`, so any
//! prime below 2^32 is representable. The modulus travels with every scalar and
//! every matrix so that mixing moduli is caught instead of silently reduced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus `p >= 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 5 && is_prime(p) {
            Ok(Modulus(p))
        } else {
            Err(Error::BadModulus(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Order of the unit group, `p - 1`.
    #[inline]
    pub fn unit_order(self) -> u32 {
        self.0 - 1
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    /// Smallest generator of `F_p^x`.
    pub fn primitive_root(self) -> u32 {
        let n = self.unit_order();
        let factors = prime_factors(n);
        (2..self.0)
            .find(|&g| factors.iter().all(|&q| self.pow(g, (n / q) as u64) != 1))
            .expect("F_p^x is cyclic")
    }

    /// Discrete logarithm to the base of [`Modulus::primitive_root`].
    pub fn log(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let g = self.primitive_root();
        let mut x = 1u32;
        for e in 0..self.unit_order() {
            if x == a {
                return Some(e);
            }
            x = self.mul(x, g);
        }
        None
    }

    /// `a` viewed as a symmetric representative in `(-p/2, p/2]`.
    pub fn signed(self, a: u32) -> i64 {
        let a = (a % self.0) as i64;
        if a > self.0 as i64 / 2 {
            a - self.0 as i64
        } else {
            a
        }
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Modulus::new(p)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A residue modulo a prime. Arithmetic between scalars of different moduli
/// panics; use [`Fp::checked_add`] and friends to get an error instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: Modulus,
}

impl Fp {
    pub fn new(value: i64, modulus: Modulus) -> Self {
        Fp {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn zero(modulus: Modulus) -> Self {
        Fp { value: 0, modulus }
    }

    pub fn one(modulus: Modulus) -> Self {
        Fp { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Fp> {
        self.modulus.inv(self.value).map(|value| Fp { value, ..self })
    }

    pub fn pow(self, exp: u64) -> Fp {
        Fp {
            value: self.modulus.pow(self.value, exp),
            ..self
        }
    }

    fn check(self, other: Fp) -> Result<Modulus> {
        if self.modulus == other.modulus {
            Ok(self.modulus)
        } else {
            Err(Error::ModulusMismatch(self.modulus.get(), other.modulus.get()))
        }
    }

    pub fn checked_add(self, other: Fp) -> Result<Fp> {
        let m = self.check(other)?;
        Ok(Fp {
            value: m.add(self.value, other.value),
            modulus: m,
        })
    }

    pub fn checked_sub(self, other: Fp) -> Result<Fp> {
        let m = self.check(other)?;
        Ok(Fp {
            value: m.sub(self.value, other.value),
            modulus: m,
        })
    }

    pub fn checked_mul(self, other: Fp) -> Result<Fp> {
        let m = self.check(other)?;
        Ok(Fp {
            value: m.mul(self.value, other.value),
            modulus: m,
        })
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.checked_add(rhs).expect("modulus mismatch")
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.checked_sub(rhs).expect("modulus mismatch")
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.checked_mul(rhs).expect("modulus mismatch")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.modulus.neg(self.value),
            ..self
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
