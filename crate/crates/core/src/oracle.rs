//! Brute-force references for checking the fast paths.
//!
//! Nothing here uses the self-similar structure: determinants come from
//! elimination on dense matrices and digit statistics from enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Rational, RingTag, RingValue};
use crate::fastdet::DigitCounts;
use crate::selfsim::{DefiningMatrix, DenseMatrix};

/// Largest `n` accepted by [`digit_counts_brute`].
pub const BRUTE_COUNT_LIMIT: u64 = 1_000_000;

/// Bareiss elimination with row pivoting over the integers. Every division
/// is exact; a nonzero remainder would be a bug and panics.
pub fn det_bareiss_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = pivot * &row[j] - &lead * &pivot_row[j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Same elimination over any supported field, divisions in the field.
fn det_bareiss_generic(m: &DenseMatrix) -> RingValue {
    let n = m.size();
    let mut a: Vec<Vec<RingValue>> = m.rows().map(|r| r.to_vec()).collect();
    let mut negate = false;
    let mut prev = RingValue::one_in(m.tag());
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return RingValue::zero_in(m.tag()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div(&prev).expect("previous pivot is nonzero");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Clears denominators row by row: returns the integer matrix and the
/// product of the row scales.
fn integer_rows(m: &DenseMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale_product = BigInt::one();
    let rows = m
        .rows()
        .map(|r| {
            let qs: Vec<&Rational> = r
                .iter()
                .map(|v| v.as_rational().expect("rational matrix"))
                .collect();
            let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale_product *= &lcm;
            qs.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();
    (rows, scale_product)
}

/// Exact determinant by fraction-free elimination.
///
/// Rational input is scaled to integers row by row first, so integer
/// matrices never leave the integers.
pub fn det_fraction_free(m: &DenseMatrix) -> RingValue {
    match m.tag() {
        RingTag::Rational => {
            let (rows, scale) = integer_rows(m);
            let det = det_bareiss_integer(rows);
            RingValue::Q(Rational::new(det, scale))
        }
        _ => det_bareiss_generic(m),
    }
}

/// Textbook Gaussian elimination with field division, as a second
/// independent determinant.
pub fn det_gaussian(m: &DenseMatrix) -> RingValue {
    let n = m.size();
    let mut a: Vec<Vec<RingValue>> = m.rows().map(|r| r.to_vec()).collect();
    let mut det = RingValue::one_in(m.tag());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return RingValue::zero_in(m.tag());
        };
        if p != k {
            a.swap(p, k);
            det = det.neg();
        }
        det = det.mul(&a[k][k]);
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            let factor = a[i][k].mul(&inv);
            if factor.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(i);
            for (x, y) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                *x = x.sub(&factor.mul(y));
            }
        }
    }
    det
}

/// Determinants of all leading principal blocks `1..=n` of `m`.
///
/// One pass of pivot-free fraction-free elimination yields every leading
/// minor as a pivot. If some leading minor vanishes the pass stops there and
/// the larger blocks are computed one by one with [`det_fraction_free`].
pub fn leading_minors(m: &DenseMatrix) -> Vec<RingValue> {
    let n = m.size();
    let mut out = Vec::with_capacity(n);
    if m.tag() != RingTag::Rational {
        return (1..=n).map(|k| det_fraction_free(&m.leading(k))).collect();
    }
    let (mut a, _) = integer_rows(m);
    let row_scales: Vec<BigInt> = m
        .rows()
        .map(|r| {
            r.iter().fold(BigInt::one(), |acc, v| {
                acc.lcm(v.as_rational().expect("rational").denom())
            })
        })
        .collect();
    let mut prev = BigInt::one();
    let mut scale = BigInt::one();
    for k in 0..n {
        scale *= &row_scales[k];
        let pivot = a[k][k].clone();
        out.push(RingValue::Q(Rational::new(pivot.clone(), scale.clone())));
        if pivot.is_zero() {
            break;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = &pivot * &row[j] - &lead * &pivot_row[j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
        }
        prev = pivot;
    }
    for k in out.len() + 1..=n {
        out.push(det_fraction_free(&m.leading(k)));
    }
    out
}

/// Digit counts by enumerating every `k < n`, writing zero as `"0"`.
pub fn digit_counts_brute(n: u64, b: u64) -> Result<DigitCounts> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if n > BRUTE_COUNT_LIMIT {
        return Err(Error::RangeTooLarge {
            n,
            limit: BRUTE_COUNT_LIMIT,
        });
    }
    let mut counts = vec![0u128; b as usize];
    for k in 0..n {
        let mut x = k;
        loop {
            counts[(x % b) as usize] += 1;
            x /= b;
            if x == 0 {
                break;
            }
        }
    }
    Ok(DigitCounts { base: b, n, counts })
}

/// Blocks of consecutive rows and columns whose determinant is not in
/// `{-1, 0, 1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinorScanReport {
    pub block: usize,
    pub s_max: u64,
    pub t_max: u64,
    pub scanned: u64,
    /// `(s, t, det)` for every violating block, ordered by `s` then `t`.
    pub violations: Vec<(u64, u64, RingValue)>,
}

impl MinorScanReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Determinants of every `l x l` block `M[s + i][t + j]` of the infinite
/// self-similar matrix with `s <= s_max`, `t <= t_max`.
///
/// Entries are evaluated from digits one strip of `l` rows at a time.
pub fn minor_scan(m: &DefiningMatrix, l: usize, s_max: u64, t_max: u64) -> MinorScanReport {
    let tag = m.tag();
    let allowed = [
        RingValue::from_int_in(tag, -1),
        RingValue::zero_in(tag),
        RingValue::one_in(tag),
    ];
    let width = t_max as usize + l;
    let mut violations = Vec::new();
    let mut scanned = 0u64;
    if l == 0 {
        return MinorScanReport {
            block: l,
            s_max,
            t_max,
            scanned,
            violations,
        };
    }
    for s in 0..=s_max {
        let strip: Vec<Vec<RingValue>> = (0..l as u64)
            .map(|i| (0..width as u64).map(|t| m.entry(s + i, t)).collect())
            .collect();
        for t in 0..=t_max {
            let block = DenseMatrix::from_fn(l, tag, |i, j| strip[i][t as usize + j].clone());
            let det = det_fraction_free(&block);
            scanned += 1;
            if !allowed.contains(&det) {
                violations.push((s, t, det));
            }
        }
    }
    MinorScanReport {
        block: l,
        s_max,
        t_max,
        scanned,
        violations,
    }
}
