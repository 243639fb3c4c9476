//! Determinants of degenerate self-similar matrices.
//!
//! Lift the defining matrix to `D + t A` over Q(t) with `A[0][0] = 0`. For a
//! generic direction `A` the lift is non-degenerate, so the factored formula
//! applies to `det M_t(n)`, a polynomial in `t` whose value at `t = 0` is
//! `det M(n)`. Writing each lifted pivot as `d(k) = t^{o_k} u_k(t)`, the
//! product is `t^N prod u_k(t)^{e_k}` with `N = sum o_k e_k`, so the value at
//! zero only needs `N` and the `b` constants `u_k(0)`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{det_from_factors, digit_counts, FactoredDeterminant, DEFAULT_BIT_BUDGET};
use crate::error::{Error, Result};
use crate::exact::{Poly, RatFun, Rational, RingTag, RingValue};
use crate::selfsim::{ldu_defining, DefiningMatrix, LduFactors};

const RANDOM_RETRIES: u64 = 32;
const RANDOM_SEED: u64 = 0x5e1f_5171_1a4d;

/// A degenerate rational defining matrix lifted to `original + t * direction`.
#[derive(Clone, Debug)]
pub struct PerturbedDefining {
    pub original: DefiningMatrix,
    /// Row-major `b x b`, with `direction[0] = 0`.
    pub direction: Vec<Rational>,
    pub lifted: DefiningMatrix,
    pub factors: LduFactors,
}

/// Result of evaluating a perturbed determinant at `t = 0`.
#[derive(Clone, Debug)]
pub struct PerturbedDeterminant {
    /// `det M_t(n)` as a product of lifted pivots.
    pub factored: FactoredDeterminant,
    /// Total order of vanishing at `t = 0`.
    pub order: i128,
    pub value: Rational,
}

impl PerturbedDefining {
    /// Lifted pivots `d(0..b)`, each a rational function of `t`.
    pub fn lifted_d(&self) -> Vec<RatFun> {
        self.factors
            .d
            .iter()
            .map(|v| v.as_ratfun().expect("lifted over Q(t)").clone())
            .collect()
    }

    /// `det M(n)` of the unperturbed matrix.
    pub fn det_at_zero(&self, n: u64) -> Result<PerturbedDeterminant> {
        self.det_at_zero_with_budget(n, DEFAULT_BIT_BUDGET)
    }

    pub fn det_at_zero_with_budget(&self, n: u64, budget: u128) -> Result<PerturbedDeterminant> {
        let b = self.original.base() as u64;
        let counts = digit_counts(n, b)?;
        let factored = det_from_factors(&self.factors, n)?;
        let mut order: i128 = 0;
        let mut units = Vec::with_capacity(self.factors.d.len());
        for (d, &e) in self.lifted_d().iter().zip(&counts.counts) {
            let o = d.order_at_zero()?;
            order += o.order as i128 * e as i128;
            units.push((RingValue::Q(o.unit_value), e));
        }
        if order < 0 {
            return Err(Error::NegativePoleOrder(order));
        }
        let value = if order > 0 {
            Rational::zero()
        } else {
            let unit_product = FactoredDeterminant::from_factors(n, RingTag::Rational, units);
            match unit_product.expand_with_budget(budget)? {
                RingValue::Q(q) => q,
                _ => unreachable!("units are rational"),
            }
        };
        Ok(PerturbedDeterminant {
            factored,
            order,
            value,
        })
    }
}

/// Lifts `m` along a caller-chosen direction.
///
/// Fails with [`Error::Degenerate`] if the lift is still degenerate over
/// Q(t), and with [`Error::NonZeroCorner`] if `direction[0] != 0`.
pub fn perturb_with(m: &DefiningMatrix, direction: &[Rational]) -> Result<PerturbedDefining> {
    if m.tag() != RingTag::Rational {
        return Err(Error::UnsupportedRing("a defining matrix over Q"));
    }
    let b = m.base();
    if direction.len() != b * b {
        return Err(Error::ShapeMismatch(format!(
            "direction needs {} entries, got {}",
            b * b,
            direction.len()
        )));
    }
    if !direction[0].is_zero() {
        return Err(Error::NonZeroCorner);
    }
    let lifted = m
        .entries()
        .iter()
        .zip(direction)
        .map(|(v, a)| {
            let c = v.as_rational().expect("rational ring").clone();
            RingValue::Qt(RatFun::from_poly(Poly::new(vec![c, a.clone()])))
        })
        .collect();
    let lifted = DefiningMatrix::from_flat(b, lifted)?;
    let factors = ldu_defining(&lifted)?;
    Ok(PerturbedDefining {
        original: m.clone(),
        direction: direction.to_vec(),
        lifted,
        factors,
    })
}

/// Direction schedule: unit at the pivot of the first singular leading
/// minor, then `A[i][j] = i*b + j`, then seeded random rationals.
fn schedule(b: usize, first_singular: usize) -> impl Iterator<Item = Vec<Rational>> {
    let q = |v: i64| Rational::from_integer(BigInt::from(v));
    let mut unit = vec![q(0); b * b];
    let pivot = first_singular - 1;
    unit[pivot * b + pivot] = q(1);
    let ramp: Vec<Rational> = (0..b * b).map(|k| q(k as i64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let random = (0..RANDOM_RETRIES).map(move |_| {
        (0..b * b)
            .map(|k| {
                if k == 0 {
                    q(0)
                } else {
                    Rational::new(
                        BigInt::from(rng.gen_range(-9i64..=9)),
                        BigInt::from(rng.gen_range(1i64..=9)),
                    )
                }
            })
            .collect::<Vec<_>>()
    });
    [unit, ramp].into_iter().chain(random)
}

/// Deterministic generic perturbation of a degenerate rational defining
/// matrix.
pub fn perturb(m: &DefiningMatrix) -> Result<PerturbedDefining> {
    if m.tag() != RingTag::Rational {
        return Err(Error::UnsupportedRing("a defining matrix over Q"));
    }
    let first_singular = match ldu_defining(m) {
        Ok(_) => return Err(Error::NotDegenerate),
        Err(Error::Degenerate { k }) => k,
        Err(e) => return Err(e),
    };
    for direction in schedule(m.base(), first_singular) {
        match perturb_with(m, &direction) {
            Ok(p) => return Ok(p),
            Err(Error::Degenerate { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PerturbationFailed)
}

/// `det M(n)` for a degenerate rational defining matrix, via the value at
/// `t = 0` of the generically perturbed determinant.
pub fn det_via_perturbation(m: &DefiningMatrix, n: u64) -> Result<Rational> {
    perturb(m)?.det_at_zero(n).map(|d| d.value)
}
