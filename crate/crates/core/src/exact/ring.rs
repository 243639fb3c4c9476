use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Fp, RatFun, Rational};

/// Which exact ring a value (or a whole matrix) lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RingTag {
    Rational,
    PrimeField(u64),
    RationalFunction,
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Rational => write!(f, "q"),
            RingTag::PrimeField(p) => write!(f, "gf {p}"),
            RingTag::RationalFunction => write!(f, "qt"),
        }
    }
}

/// A scalar from one of the supported exact rings.
///
/// Binary operations between `Q` and `Qt` values promote into `Qt`; any other
/// mix of tags (or two different prime fields) is a bug in the caller and
/// panics. Matrices validate their tags on construction so this never
/// happens through the public matrix API.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RingValue {
    Q(Rational),
    Gf(Fp),
    Qt(RatFun),
}

impl RingValue {
    pub fn int(v: i64) -> Self {
        RingValue::Q(Rational::from_integer(BigInt::from(v)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        RingValue::Q(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn tag(&self) -> RingTag {
        match self {
            RingValue::Q(_) => RingTag::Rational,
            RingValue::Gf(x) => RingTag::PrimeField(x.modulus()),
            RingValue::Qt(_) => RingTag::RationalFunction,
        }
    }

    /// Embeds an integer into the ring given by `tag`.
    pub fn from_int_in(tag: RingTag, v: i64) -> Self {
        match tag {
            RingTag::Rational => RingValue::int(v),
            RingTag::PrimeField(p) => RingValue::Gf(Fp::new_unchecked(p, v as i128)),
            RingTag::RationalFunction => {
                RingValue::Qt(RatFun::from_rational(Rational::from_integer(v.into())))
            }
        }
    }

    pub fn zero_in(tag: RingTag) -> Self {
        Self::from_int_in(tag, 0)
    }

    pub fn one_in(tag: RingTag) -> Self {
        Self::from_int_in(tag, 1)
    }

    pub fn zero_like(&self) -> Self {
        Self::zero_in(self.tag())
    }

    pub fn one_like(&self) -> Self {
        Self::one_in(self.tag())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Q(x) => x.is_zero(),
            RingValue::Gf(x) => x.is_zero(),
            RingValue::Qt(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            RingValue::Q(x) => x.is_one(),
            RingValue::Gf(x) => x.value() == 1,
            RingValue::Qt(x) => x.is_one(),
        }
    }

    /// Every nonzero element is invertible in the supported rings.
    pub fn is_invertible(&self) -> bool {
        !self.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RingValue::Q(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_ratfun(&self) -> Option<&RatFun> {
        match self {
            RingValue::Qt(x) => Some(x),
            _ => None,
        }
    }

    /// Lifts a rational into Q(t); other values are returned unchanged.
    pub fn promote_to_ratfun(&self) -> RingValue {
        match self {
            RingValue::Q(x) => RingValue::Qt(RatFun::from_rational(x.clone())),
            other => other.clone(),
        }
    }

    fn mismatch(a: &RingValue, b: &RingValue) -> ! {
        panic!("ring mismatch: {} vs {}", a.tag(), b.tag())
    }

    pub fn add(&self, other: &RingValue) -> RingValue {
        use RingValue::*;
        match (self, other) {
            (Q(a), Q(b)) => Q(a + b),
            (Gf(a), Gf(b)) => Gf(a.add(b)),
            (Qt(a), Qt(b)) => Qt(a.add(b)),
            (Q(_), Qt(_)) | (Qt(_), Q(_)) => {
                self.promote_to_ratfun().add(&other.promote_to_ratfun())
            }
            _ => Self::mismatch(self, other),
        }
    }

    pub fn sub(&self, other: &RingValue) -> RingValue {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RingValue) -> RingValue {
        use RingValue::*;
        match (self, other) {
            (Q(a), Q(b)) => Q(a * b),
            (Gf(a), Gf(b)) => Gf(a.mul(b)),
            (Qt(a), Qt(b)) => Qt(a.mul(b)),
            (Q(_), Qt(_)) | (Qt(_), Q(_)) => {
                self.promote_to_ratfun().mul(&other.promote_to_ratfun())
            }
            _ => Self::mismatch(self, other),
        }
    }

    pub fn neg(&self) -> RingValue {
        match self {
            RingValue::Q(a) => RingValue::Q(-a),
            RingValue::Gf(a) => RingValue::Gf(a.neg()),
            RingValue::Qt(a) => RingValue::Qt(a.neg()),
        }
    }

    pub fn inv(&self) -> Option<RingValue> {
        match self {
            RingValue::Q(a) if a.is_zero() => None,
            RingValue::Q(a) => Some(RingValue::Q(a.recip())),
            RingValue::Gf(a) => a.inv().map(RingValue::Gf),
            RingValue::Qt(a) => a.inv().map(RingValue::Qt),
        }
    }

    /// Exact division; `None` when dividing by zero.
    pub fn div(&self, other: &RingValue) -> Option<RingValue> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Raises to a (possibly huge) exponent. Callers guard the size of the
    /// result; see [`RingValue::bit_size`].
    pub fn pow(&self, e: u128) -> RingValue {
        match self {
            RingValue::Q(a) => RingValue::Q(rational_pow(a, e)),
            RingValue::Gf(a) => RingValue::Gf(a.pow(e)),
            RingValue::Qt(a) => RingValue::Qt(a.pow(e)),
        }
    }

    /// Upper bound on the bits needed to hold one power of this value; zero
    /// for values whose powers never grow (units of absolute value one,
    /// prime-field elements).
    pub fn bit_size(&self) -> u128 {
        fn int_bits(x: &BigInt) -> u128 {
            if x.abs().is_one() || x.is_zero() {
                0
            } else {
                x.bits() as u128
            }
        }
        match self {
            RingValue::Q(a) => int_bits(a.numer()) + int_bits(a.denom()),
            RingValue::Gf(_) => 0,
            RingValue::Qt(f) => {
                let poly_bits = |p: &super::Poly| -> u128 {
                    p.coeffs()
                        .iter()
                        .map(|c| int_bits(c.numer()) + int_bits(c.denom()) + 1)
                        .sum::<u128>()
                        + p.degree().unwrap_or(0) as u128
                };
                if f.is_one() || (f.denom().is_one() && f.numer().degree() == Some(0)) {
                    // constant: same growth as the rational
                    f.as_constant()
                        .map(|c| RingValue::Q(c).bit_size())
                        .unwrap_or(0)
                } else {
                    poly_bits(f.numer()) + poly_bits(f.denom())
                }
            }
        }
    }
}

fn rational_pow(a: &Rational, e: u128) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    if a.is_zero() {
        return Rational::zero();
    }
    if a.abs().is_one() {
        return if a.is_negative() && e % 2 == 1 {
            -Rational::one()
        } else {
            Rational::one()
        };
    }
    let mut base = a.clone();
    let mut acc = Rational::one();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Q(a) => write!(f, "{a}"),
            RingValue::Gf(a) => write!(f, "{a}"),
            RingValue::Qt(a) => write!(f, "{a}"),
        }
    }
}

impl From<Rational> for RingValue {
    fn from(x: Rational) -> Self {
        RingValue::Q(x)
    }
}

impl From<Fp> for RingValue {
    fn from(x: Fp) -> Self {
        RingValue::Gf(x)
    }
}

impl From<RatFun> for RingValue {
    fn from(x: RatFun) -> Self {
        RingValue::Qt(x)
    }
}
