use std::fmt;

use super::{write_grid, DefiningMatrix};
use crate::error::{Error, Result};
use crate::exact::{RingTag, RingValue};

/// Largest `n` materialized by default. Dense paths are oracles only.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Square matrix with entries from a single exact ring, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseMatrix {
    n: usize,
    tag: RingTag,
    data: Vec<RingValue>,
}

impl DenseMatrix {
    pub fn from_rows(rows: Vec<Vec<RingValue>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(
                "dense matrix must be square and nonempty".into(),
            ));
        }
        let tag = rows[0][0].tag();
        if rows.iter().flatten().any(|v| v.tag() != tag) {
            return Err(Error::RingMismatch(
                "dense matrix entries differ in ring".into(),
            ));
        }
        Ok(DenseMatrix {
            n,
            tag,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| RingValue::int(v)).collect())
                .collect(),
        )
    }

    /// `f` must return values tagged `tag`.
    pub fn from_fn(n: usize, tag: RingTag, mut f: impl FnMut(usize, usize) -> RingValue) -> Self {
        let data = (0..n * n).map(|k| f(k / n, k % n)).collect();
        DenseMatrix { n, tag, data }
    }

    pub fn identity(n: usize, tag: RingTag) -> Self {
        Self::from_fn(n, tag, |i, j| RingValue::from_int_in(tag, (i == j) as i64))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    pub fn get(&self, i: usize, j: usize) -> &RingValue {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingValue) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RingValue]> {
        self.data.chunks(self.n)
    }

    pub fn entries(&self) -> &[RingValue] {
        &self.data
    }

    /// Leading `k x k` block.
    pub fn leading(&self, k: usize) -> DenseMatrix {
        DenseMatrix::from_fn(k, self.tag, |i, j| self.get(i, j).clone())
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.tag, |i, j| self.get(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.rows().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
        })
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    /// Matrix product. Zero entries are skipped, which makes the sparse
    /// triangular products used by inversion cheap.
    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "sizes {} and {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let zero = RingValue::zero_in(self.tag);
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            let mut row = vec![zero.clone(); n];
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for (j, cell) in row.iter_mut().enumerate() {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        *cell = cell.add(&a.mul(b));
                    }
                }
            }
            data.extend(row);
        }
        Ok(DenseMatrix {
            n,
            tag: self.tag,
            data,
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[RingValue]) -> Result<Vec<RingValue>> {
        if v.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against size {}",
                v.len(),
                self.n
            )));
        }
        Ok(self
            .rows()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(RingValue::zero_in(self.tag), |acc, (a, b)| {
                        acc.add(&a.mul(b))
                    })
            })
            .collect())
    }

    /// Multiplies column `j` by `scale[j]`, i.e. `self * diag(scale)`.
    pub fn scale_columns(&self, scale: &[RingValue]) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, self.tag, |i, j| self.get(i, j).mul(&scale[j]))
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.rows())
    }
}

fn check_cap(n: u64, cap: usize) -> Result<usize> {
    if n > cap as u64 {
        Err(Error::SizeLimit { n, cap })
    } else {
        Ok(n as usize)
    }
}

/// The `n x n` truncation `M(n)` of the matrix defined by `m`.
pub fn dense(m: &DefiningMatrix, n: u64) -> Result<DenseMatrix> {
    dense_capped(m, n, DEFAULT_DENSE_CAP)
}

pub fn dense_capped(m: &DefiningMatrix, n: u64, cap: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::ShapeMismatch("size must be at least 1".into()));
    }
    let n = check_cap(n, cap)?;
    Ok(DenseMatrix::from_fn(n, m.tag(), |s, t| {
        m.entry(s as u64, t as u64)
    }))
}

/// `d`-fold Kronecker power of the defining matrix, most significant digit
/// in the outermost factor. Built by repeated Kronecker products, without
/// going through digit evaluation.
pub fn kron_power(m: &DefiningMatrix, d: u32) -> Result<DenseMatrix> {
    if d == 0 {
        return Err(Error::ShapeMismatch("Kronecker power needs d >= 1".into()));
    }
    let b = m.base();
    let size = (b as u64).checked_pow(d).ok_or(Error::SizeLimit {
        n: u64::MAX,
        cap: DEFAULT_DENSE_CAP,
    })?;
    check_cap(size, DEFAULT_DENSE_CAP)?;
    let mut acc = DenseMatrix::from_fn(b, m.tag(), |i, j| m.get(i, j).clone());
    for _ in 1..d {
        let inner = acc.size();
        acc = DenseMatrix::from_fn(b * inner, m.tag(), |r, c| {
            let outer = m.get(r / inner, c / inner);
            outer.mul(acc.get(r % inner, c % inner))
        });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pascal::{pascal_defining, PascalKind, PascalRing};

    fn pascal2() -> DefiningMatrix {
        DefiningMatrix::from_ints(&[&[1, 1], &[1, 0]]).unwrap()
    }

    #[test]
    fn pascal2_dense4() {
        let d = dense(&pascal2(), 4).unwrap();
        let want =
            DenseMatrix::from_ints(&[&[1, 1, 1, 1], &[1, 0, 1, 0], &[1, 1, 0, 0], &[1, 0, 0, 0]])
                .unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn dense_one_is_unit() {
        let d = dense(&pascal2(), 1).unwrap();
        assert_eq!(d, DenseMatrix::from_ints(&[&[1]]).unwrap());
    }

    #[test]
    fn dense_base_is_defining() {
        let m = pascal_defining(3, PascalKind::Legendre, PascalRing::Rational).unwrap();
        let d = dense(&m, 3).unwrap();
        assert_eq!(d.entries(), m.entries());
    }

    #[test]
    fn dense_cap_enforced() {
        assert_eq!(
            dense(&pascal2(), 4097),
            Err(Error::SizeLimit { n: 4097, cap: 4096 })
        );
        assert!(dense_capped(&pascal2(), 9, 8).is_err());
    }

    #[test]
    fn kron_matches_dense() {
        let m = pascal2();
        assert_eq!(kron_power(&m, 1).unwrap().entries(), m.entries());
        assert_eq!(kron_power(&m, 2).unwrap(), dense(&m, 4).unwrap());
        let l3 = pascal_defining(3, PascalKind::Legendre, PascalRing::Rational).unwrap();
        assert_eq!(kron_power(&l3, 2).unwrap(), dense(&l3, 9).unwrap());
        assert!(matches!(kron_power(&m, 13), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn sparse_product_matches_definition() {
        let a = DenseMatrix::from_ints(&[&[1, 2], &[0, 3]]).unwrap();
        let b = DenseMatrix::from_ints(&[&[4, 0], &[5, 6]]).unwrap();
        assert_eq!(
            a.mul(&b).unwrap(),
            DenseMatrix::from_ints(&[&[14, 12], &[15, 18]]).unwrap()
        );
    }
}
