#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use selfsim::selfsim::ldu_defining;
use selfsim::{DefiningMatrix, RingValue};

/// Rational with numerator and denominator bounded by 9 in absolute value.
pub fn small_rational() -> impl Strategy<Value = RingValue> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| RingValue::frac(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = RingValue> {
    small_rational().prop_filter("nonzero", |v| !v.is_zero())
}

pub fn defining(bases: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DefiningMatrix> {
    bases.prop_flat_map(|b| {
        proptest::collection::vec(small_rational(), b * b).prop_map(move |mut e| {
            e[0] = RingValue::int(1);
            DefiningMatrix::from_flat(b, e).unwrap()
        })
    })
}

pub fn nondegenerate(
    bases: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = DefiningMatrix> {
    defining(bases).prop_filter("non-degenerate", |m| ldu_defining(m).is_ok())
}

/// Two lower triangular defining matrices of the same base with invertible
/// diagonals; transpose both for the upper case.
pub fn lower_pair(
    bases: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (DefiningMatrix, DefiningMatrix)> {
    bases.prop_flat_map(|b| (lower(b), lower(b)))
}

pub fn lower(b: usize) -> impl Strategy<Value = DefiningMatrix> {
    (
        proptest::collection::vec(nonzero_rational(), b),
        proptest::collection::vec(small_rational(), b * b),
    )
        .prop_map(move |(diag, below)| {
            DefiningMatrix::from_fn(b, |i, j| {
                if i == 0 && j == 0 {
                    RingValue::int(1)
                } else if i == j {
                    diag[i].clone()
                } else if i > j {
                    below[i * b + j].clone()
                } else {
                    RingValue::int(0)
                }
            })
            .unwrap()
        })
}

/// Seeded draw of a non-degenerate rational defining matrix of base `b`.
pub fn random_nondegenerate(rng: &mut impl Rng, b: usize) -> DefiningMatrix {
    loop {
        let entries = (0..b * b)
            .map(|k| {
                if k == 0 {
                    RingValue::int(1)
                } else {
                    RingValue::frac(rng.gen_range(-9..=9), rng.gen_range(1..=9))
                }
            })
            .collect();
        let m = DefiningMatrix::from_flat(b, entries).unwrap();
        if ldu_defining(&m).is_ok() {
            return m;
        }
    }
}
