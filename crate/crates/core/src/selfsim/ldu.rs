use super::DefiningMatrix;
use crate::error::{Error, Result};
use crate::exact::RingValue;

/// `D = L diag(d) U` for a non-degenerate defining matrix `D`.
///
/// `lower` and `upper` are unipotent, `d[0] = 1`, and `d[k]` is the ratio of
/// the leading principal minors of sizes `k + 1` and `k`. Each factor is
/// itself a defining matrix, and the self-similar matrices they induce
/// factor `M(n)` the same way for every `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LduFactors {
    pub lower: DefiningMatrix,
    pub d: Vec<RingValue>,
    pub upper: DefiningMatrix,
    /// Leading principal minors of sizes `1..=b`.
    pub minors: Vec<RingValue>,
}

impl LduFactors {
    pub fn base(&self) -> usize {
        self.d.len()
    }

    /// `diag(d)` as a defining matrix.
    pub fn diagonal(&self) -> DefiningMatrix {
        let tag = self.lower.tag();
        DefiningMatrix::from_fn(self.base(), |i, j| {
            if i == j {
                self.d[i].clone()
            } else {
                RingValue::zero_in(tag)
            }
        })
        .expect("d[0] = 1")
    }

    /// `L diag(d) U`, which must equal the original defining matrix.
    pub fn reconstruct(&self) -> DefiningMatrix {
        self.lower
            .matmul(&self.diagonal())
            .and_then(|ld| ld.matmul(&self.upper))
            .expect("factors share base and ring")
    }
}

/// LDU factorization of the defining matrix.
///
/// Runs fraction-free elimination without pivoting. After step `k` the pivot
/// `a[k][k]` is the leading minor of size `k + 1`, while row `k` and column
/// `k` hold the bordered minors that, divided by that pivot, give the rows of
/// `U` and the columns of `L`.
pub fn ldu_defining(m: &DefiningMatrix) -> Result<LduFactors> {
    let b = m.base();
    let tag = m.tag();
    let mut a: Vec<RingValue> = m.entries().to_vec();
    let mut prev = RingValue::one_in(tag);
    let mut minors = Vec::with_capacity(b);
    for k in 0..b {
        let pivot = a[k * b + k].clone();
        if !pivot.is_invertible() {
            return Err(Error::Degenerate { k: k + 1 });
        }
        for i in k + 1..b {
            let aik = a[i * b + k].clone();
            for j in k + 1..b {
                let num = pivot.mul(&a[i * b + j]).sub(&aik.mul(&a[k * b + j]));
                a[i * b + j] = num.div(&prev).expect("previous pivot is nonzero");
            }
        }
        minors.push(pivot.clone());
        prev = pivot;
    }

    let zero = RingValue::zero_in(tag);
    let one = RingValue::one_in(tag);
    let lower = DefiningMatrix::from_fn(b, |i, k| match i.cmp(&k) {
        std::cmp::Ordering::Less => zero.clone(),
        std::cmp::Ordering::Equal => one.clone(),
        std::cmp::Ordering::Greater => a[i * b + k].div(&minors[k]).expect("nonzero minor"),
    })?;
    let upper = DefiningMatrix::from_fn(b, |k, j| match k.cmp(&j) {
        std::cmp::Ordering::Greater => zero.clone(),
        std::cmp::Ordering::Equal => one.clone(),
        std::cmp::Ordering::Less => a[k * b + j].div(&minors[k]).expect("nonzero minor"),
    })?;
    let d = (0..b)
        .map(|k| {
            if k == 0 {
                minors[0].clone()
            } else {
                minors[k].div(&minors[k - 1]).expect("nonzero minor")
            }
        })
        .collect();
    Ok(LduFactors {
        lower,
        d,
        upper,
        minors,
    })
}
