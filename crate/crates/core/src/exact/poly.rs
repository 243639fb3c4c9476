use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Univariate polynomial in `t` with rational coefficients, stored ascending.
///
/// The coefficient list never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Multiplicity of `t` as a factor; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Divides off the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Scales to an integer polynomial with content 1, keeping the sign of
    /// the leading coefficient. Keeps remainder sequences from bloating.
    fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::lcm(acc, c.denom().clone())
        });
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
        let content = if ints.last().unwrap().is_negative() {
            -content
        } else {
            content
        };
        Poly::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u128) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

fn write_coeff_term(f: &mut fmt::Formatter<'_>, c: &Rational, power: usize) -> fmt::Result {
    let abs = c.abs();
    let mono = match power {
        0 => String::new(),
        1 => "t".to_string(),
        k => format!("t^{k}"),
    };
    if power == 0 {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{mono}")
    } else {
        write!(f, "{abs}*{mono}")
    }
}

impl fmt::Display for Poly {
    /// Descending powers: `-2*t - 4`, `t^2 + 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_coeff_term(f, c, power)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = Poly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(&[-1, 0, 0, 2, 5]);
        let b = Poly::new(vec![q(1, 2), q(-3, 1), q(7, 3)]);
        let (quot, rem) = a.div_rem(&b);
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap() < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (t - 1)(t + 2) and (t - 1)(3t + 5)
        let a = Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[2, 1]));
        let b = Poly::from_ints(&[-1, 1]).mul(&Poly::from_ints(&[5, 3]));
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
        assert_eq!(a.gcd(&Poly::zero()), a.monic());
        assert!(Poly::zero().gcd(&Poly::zero()).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[-4, -2]).to_string(), "-2*t - 4");
        assert_eq!(
            Poly::new(vec![q(1, 2), q(0, 1), q(1, 1)]).to_string(),
            "t^2 + 1/2"
        );
        assert_eq!(Poly::t().to_string(), "t");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn valuation_and_eval() {
        let p = Poly::from_ints(&[0, 0, 3, 1]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.eval(&q(-1, 1)), q(2, 1));
        assert_eq!(Poly::zero().valuation(), None);
    }
}
