//! Determinants of `M(n)` without materializing the matrix.
//!
//! With `D = L diag(d) U` the LDU factorization of the defining matrix,
//! `det M(n) = prod_{k < n} prod_i d(k_i)`, so only the number of times each
//! digit `j` appears among the base-`b` expansions of `0..n` matters:
//!
//! ```text
//! det M(n) = d(0)^e_0 * d(1)^e_1 * ... * d(b-1)^e_{b-1}
//! ```
//!
//! The exponents `e_j(n)` come from a per-position closed form in
//! `O(b log n)` operations, and the result is kept factored until a caller
//! asks for the expansion under an explicit size budget.

mod perturb;

use std::fmt;

use num_traits::Signed;

pub use perturb::{
    det_via_perturbation, perturb, perturb_with, PerturbedDefining, PerturbedDeterminant,
};

use crate::error::{Error, Result};
use crate::exact::{RingTag, RingValue};
use crate::selfsim::{ldu_defining, DefiningMatrix, LduFactors};

/// Default cap on the estimated size of an expanded determinant.
pub const DEFAULT_BIT_BUDGET: u128 = 1_000_000;

/// Digit occurrence counts over the base-`b` expansions of `0, 1, ..., n-1`.
///
/// `counts[j]` is the exponent of `d(j)`. Zero is counted as the one-digit
/// string `"0"`; every other `k` uses its minimal expansion. The convention
/// only moves `counts[0]`, and `d(0) = 1` always.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DigitCounts {
    pub base: u64,
    pub n: u64,
    pub counts: Vec<u128>,
}

impl DigitCounts {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }
}

/// Closed-form digit statistics, one pass per digit position.
pub fn digit_counts(n: u64, b: u64) -> Result<DigitCounts> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let mut counts = vec![0u128; b as usize];
    let n128 = n as u128;
    let b128 = b as u128;
    let mut weight: u128 = 1;
    let mut position = 0u32;
    while n > 0 && (position == 0 || weight < n128) {
        // Among 0..n, digit j sits at this position in `full` complete
        // blocks of size b*weight plus part of the last one.
        let (full, rem) = match weight.checked_mul(b128) {
            Some(block) => (n128 / block, n128 % block),
            None => (0, n128),
        };
        for (j, c) in counts.iter_mut().enumerate() {
            let start = (j as u128).saturating_mul(weight);
            *c += full * weight + rem.saturating_sub(start).min(weight);
        }
        if position > 0 {
            // k < weight has no digit here; those zeros are not written.
            counts[0] -= n128.min(weight);
        }
        match weight.checked_mul(b128) {
            Some(w) => weight = w,
            None => break,
        }
        position += 1;
    }
    Ok(DigitCounts { base: b, n, counts })
}

/// `det M(n)` as a product `prod_k d(k)^{e_k}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredDeterminant {
    pub n: u64,
    pub tag: RingTag,
    /// `(d(k), e_k(n))` for `k = 0..b`.
    pub factors: Vec<(RingValue, u128)>,
}

impl FactoredDeterminant {
    pub fn from_factors(n: u64, tag: RingTag, factors: Vec<(RingValue, u128)>) -> Self {
        FactoredDeterminant { n, tag, factors }
    }

    /// Upper bound on the bits of the expanded value.
    pub fn estimated_bits(&self) -> u128 {
        self.factors
            .iter()
            .map(|(v, e)| v.bit_size().saturating_mul(*e))
            .fold(0u128, u128::saturating_add)
    }

    pub fn expand(&self) -> Result<RingValue> {
        self.expand_with_budget(DEFAULT_BIT_BUDGET)
    }

    pub fn expand_with_budget(&self, budget: u128) -> Result<RingValue> {
        let estimate = self.estimated_bits();
        if estimate > budget {
            return Err(Error::BitBudgetExceeded { estimate, budget });
        }
        Ok(self
            .factors
            .iter()
            .filter(|(_, e)| *e > 0)
            .fold(RingValue::one_in(self.tag), |acc, (v, e)| {
                acc.mul(&v.pow(*e))
            }))
    }

    /// Factors that actually contribute: exponent positive, base not one.
    pub fn nontrivial(&self) -> impl Iterator<Item = &(RingValue, u128)> {
        self.factors.iter().filter(|(v, e)| *e > 0 && !v.is_one())
    }
}

fn write_base(f: &mut fmt::Formatter<'_>, v: &RingValue) -> fmt::Result {
    let plain = match v {
        RingValue::Q(q) => q.is_integer() && !q.is_negative(),
        RingValue::Gf(_) => true,
        RingValue::Qt(_) => false,
    };
    if plain {
        write!(f, "{v}")
    } else {
        write!(f, "({v})")
    }
}

impl fmt::Display for FactoredDeterminant {
    /// `(-2)^6 * (-1/2)^6`; the empty product prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, e) in self.nontrivial() {
            if !first {
                write!(f, " * ")?;
            }
            write_base(f, v)?;
            write!(f, "^{e}")?;
            first = false;
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Factored determinant from precomputed LDU factors.
pub fn det_from_factors(factors: &LduFactors, n: u64) -> Result<FactoredDeterminant> {
    let counts = digit_counts(n, factors.base() as u64)?;
    Ok(FactoredDeterminant {
        n,
        tag: factors.lower.tag(),
        factors: factors.d.iter().cloned().zip(counts.counts).collect(),
    })
}

/// `det M(n)` for a non-degenerate defining matrix, in factored form.
///
/// Fails with [`Error::Degenerate`] when some leading minor of the defining
/// matrix vanishes; such inputs go through [`det_via_perturbation`].
pub fn det_selfsim(m: &DefiningMatrix, n: u64) -> Result<FactoredDeterminant> {
    let f = ldu_defining(m)?;
    det_from_factors(&f, n)
}

/// Expands a factored determinant under the default bit budget.
pub fn det_expand(f: &FactoredDeterminant) -> Result<RingValue> {
    f.expand()
}
