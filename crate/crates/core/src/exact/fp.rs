use std::fmt;

use crate::error::{Error, Result};

/// Deterministic trial division; moduli here are word sized and small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of GF(p) for a word-sized prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    p: u64,
    v: u64,
}

impl Fp {
    pub fn new(p: u64, value: i128) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::new_unchecked(p, value))
    }

    /// Skips the primality test; `p` must already be known prime.
    pub(crate) fn new_unchecked(p: u64, value: i128) -> Self {
        let v = value.rem_euclid(p as i128) as u64;
        Fp { p, v }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    fn check(&self, other: &Fp) {
        assert_eq!(
            self.p, other.p,
            "mixed prime fields GF({}) and GF({})",
            self.p, other.p
        );
    }

    pub fn add(&self, other: &Fp) -> Fp {
        self.check(other);
        Fp {
            p: self.p,
            v: ((self.v as u128 + other.v as u128) % self.p as u128) as u64,
        }
    }

    pub fn sub(&self, other: &Fp) -> Fp {
        self.check(other);
        Fp {
            p: self.p,
            v: ((self.v as u128 + (self.p - other.v) as u128) % self.p as u128) as u64,
        }
    }

    pub fn mul(&self, other: &Fp) -> Fp {
        self.check(other);
        Fp {
            p: self.p,
            v: ((self.v as u128 * other.v as u128) % self.p as u128) as u64,
        }
    }

    pub fn neg(&self) -> Fp {
        Fp {
            p: self.p,
            v: (self.p - self.v) % self.p,
        }
    }

    pub fn pow(&self, mut e: u128) -> Fp {
        let m = self.p as u128;
        let mut base = self.v as u128 % m;
        let mut acc = 1u128 % m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Fp {
            p: self.p,
            v: acc as u64,
        }
    }

    /// Fermat inverse; `None` for zero.
    pub fn inv(&self) -> Option<Fp> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p as u128 - 2))
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}
