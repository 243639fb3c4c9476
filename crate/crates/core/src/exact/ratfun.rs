use std::fmt;

use num_traits::Zero;

use super::{Poly, Rational};
use crate::error::{Error, Result};

/// Element of Q(t) in canonical form: coprime numerator and denominator,
/// denominator monic. Zero is `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// Decomposition `f = t^order * u(t)` with `u(0)` finite and nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderAtZero {
    pub order: i64,
    pub unit_value: Rational,
}

impl RatFun {
    /// Brings `num / den` into canonical form.
    pub fn reduce(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lc_inv = den.leading().expect("nonzero").recip();
        Ok(RatFun {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.is_one()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), true) => Some(self.num.coeffs()[0].clone()),
            _ => None,
        }
    }

    fn from_parts(num: Poly, den: Poly) -> Self {
        Self::reduce(num, den).expect("denominator of a product of nonzero polynomials")
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return Self::from_parts(self.num.add(&other.num), self.den.clone());
        }
        Self::from_parts(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            None
        } else {
            Some(Self::from_parts(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, other: &RatFun) -> Option<RatFun> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: u128) -> RatFun {
        // Already coprime, so powers stay coprime and the denominator monic.
        RatFun {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Value at a rational point; `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Splits off the power of `t`: `f = t^order * u(t)`, returning `u(0)`.
    pub fn order_at_zero(&self) -> Result<OrderAtZero> {
        let vn = self.num.valuation().ok_or(Error::ZeroInput)?;
        let vd = self.den.valuation().expect("denominator is nonzero");
        let unit_value = &self.num.coeffs()[vn] / &self.den.coeffs()[vd];
        Ok(OrderAtZero {
            order: vn as i64 - vd as i64,
            unit_value,
        })
    }

    /// Value at `t = 0`; zero maps to zero.
    pub fn eval_at_zero(&self) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let o = self.order_at_zero()?;
        match o.order {
            k if k < 0 => Err(Error::PoleAtZero),
            0 => Ok(o.unit_value),
            _ => Ok(Rational::zero()),
        }
    }
}

/// Canonical form of `n / d`.
pub fn ratfun_reduce(n: Poly, d: Poly) -> Result<RatFun> {
    RatFun::reduce(n, d)
}

/// Order and unit value of a nonzero rational function at `t = 0`.
pub fn order_at_zero(f: &RatFun) -> Result<OrderAtZero> {
    f.order_at_zero()
}

/// Evaluates at `t = 0`; fails on a pole.
pub fn ring_eval_at_zero(f: &RatFun) -> Result<Rational> {
    f.eval_at_zero()
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
