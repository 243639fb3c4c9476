//! b-self-similar matrices.
//!
//! A matrix `M` indexed by non-negative integers is *b-self-similar* when
//! `M[0][0] = 1` and every entry factors over base-`b` digits:
//!
//! ```text
//! M[s][t] = prod_i  D[s_i][t_i]      s = sum s_i b^i,  t = sum t_i b^i
//! ```
//!
//! The `b x b` block `D` (the *defining matrix*) therefore determines the
//! whole, possibly infinite, matrix. Entries are evaluated lazily from the
//! digits; [`dense`] materializes finite truncations for oracle checks.

mod dense;
mod ldu;
mod triangular;

use std::fmt;

pub use dense::{dense, dense_capped, kron_power, DenseMatrix, DEFAULT_DENSE_CAP};
pub use ldu::{ldu_defining, LduFactors};
pub use triangular::{compose_triangular, inverse_dense, invert_triangular};

use crate::error::{Error, Result};
use crate::exact::{RingTag, RingValue};

/// Base-`b` digits of a non-negative integer, least significant first.
///
/// The representation is minimal: no trailing zero digit, and zero is the
/// empty list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitVector {
    base: u64,
    digits: Vec<u64>,
}

impl DigitVector {
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// Reassembles the integer. Panics on `u64` overflow, which cannot
    /// happen for vectors built by [`digits`].
    pub fn value(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.base + d)
    }
}

/// Minimal base-`b` expansion of `n`.
pub fn digits(n: u64, b: u64) -> Result<DigitVector> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let mut out = Vec::new();
    let mut n = n;
    while n > 0 {
        out.push(n % b);
        n /= b;
    }
    Ok(DigitVector {
        base: b,
        digits: out,
    })
}

/// The `b x b` seed of a self-similar matrix.
///
/// Entries share one ring tag; mixing rationals with rational functions
/// promotes everything into Q(t).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DefiningMatrix {
    base: usize,
    tag: RingTag,
    entries: Vec<RingValue>,
}

impl DefiningMatrix {
    pub fn new(rows: Vec<Vec<RingValue>>) -> Result<Self> {
        let b = rows.len();
        if rows.iter().any(|r| r.len() != b) {
            return Err(Error::ShapeMismatch(format!(
                "defining matrix must be square, got {b} rows"
            )));
        }
        Self::from_flat(b, rows.into_iter().flatten().collect())
    }

    /// Row-major construction.
    pub fn from_flat(base: usize, entries: Vec<RingValue>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        if entries.len() != base * base {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                base * base,
                entries.len()
            )));
        }
        let tag = unify_tags(&entries)?;
        let entries: Vec<RingValue> = if tag == RingTag::RationalFunction {
            entries.iter().map(RingValue::promote_to_ratfun).collect()
        } else {
            entries
        };
        if !entries[0].is_one() {
            return Err(Error::Normalization);
        }
        Ok(DefiningMatrix { base, tag, entries })
    }

    pub fn from_fn(base: usize, mut f: impl FnMut(usize, usize) -> RingValue) -> Result<Self> {
        let entries = (0..base * base).map(|k| f(k / base, k % base)).collect();
        Self::from_flat(base, entries)
    }

    /// Convenience constructor from integer rows over Q.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| RingValue::int(v)).collect())
                .collect(),
        )
    }

    pub fn identity(base: usize, tag: RingTag) -> Result<Self> {
        Self::from_fn(base, |i, j| RingValue::from_int_in(tag, (i == j) as i64))
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    pub fn get(&self, i: usize, j: usize) -> &RingValue {
        &self.entries[i * self.base + j]
    }

    pub fn entries(&self) -> &[RingValue] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RingValue]> {
        self.entries.chunks(self.base)
    }

    pub fn transpose(&self) -> DefiningMatrix {
        let b = self.base;
        DefiningMatrix {
            base: b,
            tag: self.tag,
            entries: (0..b * b).map(|k| self.get(k % b, k / b).clone()).collect(),
        }
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.base).all(|i| (i + 1..self.base).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.transpose().is_lower_triangular()
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_lower_triangular() && self.is_upper_triangular()
    }

    pub fn is_unipotent(&self) -> bool {
        (self.is_lower_triangular() || self.is_upper_triangular())
            && (0..self.base).all(|i| self.get(i, i).is_one())
    }

    /// Plain `b x b` product, with no structural checks.
    pub fn matmul(&self, other: &DefiningMatrix) -> Result<DefiningMatrix> {
        if self.base != other.base {
            return Err(Error::ShapeMismatch(format!(
                "bases {} and {}",
                self.base, other.base
            )));
        }
        if self.tag != other.tag {
            return Err(Error::RingMismatch(format!(
                "{} and {}",
                self.tag, other.tag
            )));
        }
        let b = self.base;
        Self::from_fn(b, |i, j| {
            (0..b).fold(RingValue::zero_in(self.tag), |acc, k| {
                acc.add(&self.get(i, k).mul(other.get(k, j)))
            })
        })
    }

    /// Entry `(s, t)` of the induced infinite matrix.
    pub fn entry(&self, s: u64, t: u64) -> RingValue {
        let b = self.base as u64;
        let (mut s, mut t) = (s, t);
        let mut acc = RingValue::one_in(self.tag);
        // Missing high digits are zero, and D[0][0] = 1.
        while s > 0 || t > 0 {
            let v = self.get((s % b) as usize, (t % b) as usize);
            if v.is_zero() {
                return v.clone();
            }
            if !v.is_one() {
                acc = acc.mul(v);
            }
            s /= b;
            t /= b;
        }
        acc
    }
}

fn unify_tags(entries: &[RingValue]) -> Result<RingTag> {
    let mut tag = entries
        .first()
        .map(RingValue::tag)
        .unwrap_or(RingTag::Rational);
    for e in entries {
        tag = match (tag, e.tag()) {
            (a, b) if a == b => a,
            (RingTag::Rational, RingTag::RationalFunction)
            | (RingTag::RationalFunction, RingTag::Rational) => RingTag::RationalFunction,
            (a, b) => return Err(Error::RingMismatch(format!("{a} and {b}"))),
        };
    }
    Ok(tag)
}

/// Entry `(s, t)` of the self-similar matrix defined by `m`.
pub fn entry(m: &DefiningMatrix, s: u64, t: u64) -> RingValue {
    m.entry(s, t)
}

impl fmt::Display for DefiningMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.rows())
    }
}

pub(crate) fn write_grid<'a>(
    f: &mut fmt::Formatter<'_>,
    rows: impl Iterator<Item = &'a [RingValue]>,
) -> fmt::Result {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(f, "{}", cells.join(" "))?;
    }
    Ok(())
}
