//! Pascal's triangle modulo a prime and its companions.
//!
//! By Lucas' congruence `C(n, k) = prod C(n_i, k_i) (mod p)` over base-`p`
//! digits, so the symmetric matrix `C(i + j, i) mod p`, the lower triangular
//! `C(i, j) mod p`, and their images under the Legendre symbol are all
//! `p`-self-similar. This module builds their defining matrices and the
//! number-theoretic pieces around them: the Thue-Morse sequence, the
//! alternating-sign vectors `mu`, and the integer Pascal matrices.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{is_prime, Fp, Rational, RingTag, RingValue};
use crate::fastdet::digit_counts;
use crate::selfsim::{digits, DefiningMatrix, DenseMatrix, DEFAULT_DENSE_CAP};

/// Which Pascal-derived matrix to build.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PascalKind {
    /// `C(i + j, i) mod p`, lifted to `0..p`.
    BinomLift,
    /// Legendre symbol of `C(i + j, i) mod p`. Same as `BinomLift` at `p = 2`.
    Legendre,
    /// `C(i, j) mod p`.
    Lower,
    /// `(-1)^(i + j) (C(i, j) mod p)`, the inverse of `Lower` over GF(p).
    LowerSigned,
}

/// Ring the generated entries live in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PascalRing {
    Rational,
    PrimeField,
}

fn small_binom_mod(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    // n < p, so k! (n - k)! is invertible mod p.
    let mut num = Fp::new_unchecked(p, 1);
    let mut den = Fp::new_unchecked(p, 1);
    for i in 0..k {
        num = num.mul(&Fp::new_unchecked(p, (n - i) as i128));
        den = den.mul(&Fp::new_unchecked(p, (i + 1) as i128));
    }
    num.mul(&den.inv().expect("k! is a unit mod p")).value()
}

/// `C(n, k) mod p` as a digit product.
pub fn binom_mod_p(n: u64, k: u64, p: u64) -> Result<Fp> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (mut n, mut k) = (n, k);
    let mut acc = Fp::new_unchecked(p, 1);
    while k > 0 {
        let c = small_binom_mod(n % p, k % p, p);
        if c == 0 {
            return Ok(Fp::new_unchecked(p, 0));
        }
        acc = acc.mul(&Fp::new_unchecked(p, c as i128));
        n /= p;
        k /= p;
    }
    Ok(acc)
}

/// Legendre symbol `(a / p)` by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let x = Fp::new_unchecked(p, a as i128);
    if x.is_zero() {
        return Ok(0);
    }
    Ok(if x.pow((p as u128 - 1) / 2).value() == 1 {
        1
    } else {
        -1
    })
}

/// Defining matrix of one of the Pascal-derived `p`-self-similar matrices.
pub fn pascal_defining(p: u64, kind: PascalKind, ring: PascalRing) -> Result<DefiningMatrix> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let size = usize::try_from(p).map_err(|_| Error::SizeLimit {
        n: p,
        cap: DEFAULT_DENSE_CAP,
    })?;
    if p > DEFAULT_DENSE_CAP as u64 {
        return Err(Error::SizeLimit {
            n: p,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let symbols: Vec<i8> = if kind == PascalKind::Legendre && p > 2 {
        (0..p as i64)
            .map(|a| legendre_symbol(a, p).expect("odd prime"))
            .collect()
    } else {
        Vec::new()
    };
    let value = |i: u64, j: u64| -> i64 {
        match kind {
            PascalKind::BinomLift => small_binom_mod(i + j, i, p) as i64,
            PascalKind::Legendre if p == 2 => small_binom_mod(i + j, i, p) as i64,
            PascalKind::Legendre => {
                let c = binom_mod_p(i + j, i, p).expect("prime").value();
                symbols[c as usize] as i64
            }
            PascalKind::Lower => small_binom_mod(i, j, p) as i64,
            PascalKind::LowerSigned => {
                let c = small_binom_mod(i, j, p) as i64;
                if (i + j).is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            }
        }
    };
    let tag = match ring {
        PascalRing::Rational => RingTag::Rational,
        PascalRing::PrimeField => RingTag::PrimeField(p),
    };
    DefiningMatrix::from_fn(size, |i, j| {
        RingValue::from_int_in(tag, value(i as u64, j as u64))
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Integer binomial lower matrix `C(i, j)`, `0 <= i, j < b`, over Q.
pub fn binomial_lower(b: usize) -> Result<DefiningMatrix> {
    DefiningMatrix::from_fn(b, |i, j| {
        RingValue::Q(Rational::from_integer(binomial(i as u64, j as u64)))
    })
}

/// `(-1)^(i + j) C(i, j)`: the inverse of [`binomial_lower`].
pub fn binomial_lower_signed(b: usize) -> Result<DefiningMatrix> {
    DefiningMatrix::from_fn(b, |i, j| {
        let c = binomial(i as u64, j as u64);
        RingValue::Q(Rational::from_integer(if (i + j) % 2 == 0 {
            c
        } else {
            -c
        }))
    })
}

/// Thue-Morse bit `s_k`, unrolled from `s_0 = 0`, `s_2k = s_k`,
/// `s_2k+1 = 1 - s_k`.
pub fn thue_morse(k: u64) -> u8 {
    let mut k = k;
    let mut flips = 0u8;
    while k > 0 {
        if k & 1 == 1 {
            flips ^= 1;
        }
        k >>= 1;
    }
    flips
}

/// Stateless iterator over `s_0, s_1, ...`.
#[derive(Clone, Debug, Default)]
pub struct ThueMorseStream {
    next: u64,
}

impl ThueMorseStream {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Iterator for ThueMorseStream {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        let k = self.next;
        self.next = self.next.checked_add(1)?;
        Some(thue_morse(k))
    }
}

/// Closed form for `det M(n)` of the mod-2 Pascal matrix:
/// `(-1)^m` for `n = 2m`, `(-1)^(m + s_m)` for `n = 2m + 1`.
pub fn det_pascal2_closed(n: u64) -> i8 {
    let m = n / 2;
    let exponent = if n.is_multiple_of(2) {
        m % 2
    } else {
        (m % 2 + thue_morse(m) as u64) % 2
    };
    if exponent == 0 {
        1
    } else {
        -1
    }
}

/// `mu_k = (-1)^(digit sum of k in base b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MuVector {
    pub base: u64,
    pub entries: Vec<i8>,
}

impl MuVector {
    pub fn as_ring_values(&self) -> Vec<RingValue> {
        self.entries
            .iter()
            .map(|&v| RingValue::int(v as i64))
            .collect()
    }
}

/// First `n` entries of the first column of the inverse of the self-similar
/// binomial lower matrix, in closed form.
pub fn mu_vector(b: u64, n: u64) -> Result<MuVector> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let entries = (0..n)
        .map(|k| {
            let s = digits(k, b).expect("base checked").digit_sum();
            if s.is_multiple_of(2) {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(MuVector { base: b, entries })
}

/// Sums of `prod C(n_i, k_i)` over even and over odd `k`, for odd `b`.
///
/// Only `k` digitwise below `n` contribute, so those are enumerated
/// directly. Both sums equal `2^(digit sum of n - 1)`.
pub fn mu_partition_sums(b: u64, n: u64) -> Result<(BigUint, BigUint)> {
    if b.is_multiple_of(2) {
        return Err(Error::EvenBase(b));
    }
    if b < 3 {
        return Err(Error::InvalidBase(b));
    }
    let nd = digits(n, b)?;
    // For odd b, k is even iff its digit sum is even; track that parity.
    let mut even = BigUint::one();
    let mut odd = BigUint::zero();
    for &nu in nd.digits() {
        let mut next_even = BigUint::zero();
        let mut next_odd = BigUint::zero();
        for kappa in 0..=nu {
            let c = binomial(nu, kappa).to_biguint().expect("non-negative");
            if kappa % 2 == 0 {
                next_even += &even * &c;
                next_odd += &odd * &c;
            } else {
                next_even += &odd * &c;
                next_odd += &even * &c;
            }
        }
        even = next_even;
        odd = next_odd;
    }
    Ok((even, odd))
}

/// `L = C(i, j)`, `R = (-1)^(i+j) C(i, j)`, `S = C(i + j, i)` as `n x n`
/// integer matrices.
pub fn pascal_integer_trio(n: usize) -> Result<(DenseMatrix, DenseMatrix, DenseMatrix)> {
    if n > DEFAULT_DENSE_CAP {
        return Err(Error::SizeLimit {
            n: n as u64,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let q = |x: BigInt| RingValue::Q(Rational::from_integer(x));
    let tag = RingTag::Rational;
    let l = DenseMatrix::from_fn(n, tag, |i, j| q(binomial(i as u64, j as u64)));
    let r = DenseMatrix::from_fn(n, tag, |i, j| {
        let c = binomial(i as u64, j as u64);
        q(if (i + j) % 2 == 0 { c } else { -c })
    });
    let s = DenseMatrix::from_fn(n, tag, |i, j| q(binomial((i + j) as u64, i as u64)));
    Ok((l, r, s))
}

/// The nilpotent matrix with `A[i][i-1] = i`, whose exponential is `L`.
pub fn pascal_generator(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, RingTag::Rational, |i, j| {
        RingValue::int(if i == j + 1 { i as i64 } else { 0 })
    })
}

/// `exp(A) = sum A^k / k!` for nilpotent `A`; the series stops at the first
/// zero power, which for an `n x n` nilpotent matrix is at most `A^n`.
pub fn exp_nilpotent(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.size();
    let mut acc = DenseMatrix::identity(n, a.tag());
    let mut term = DenseMatrix::identity(n, a.tag());
    for k in 1..=n {
        term = term.mul(a)?;
        let inv_k = RingValue::frac(1, k as i64);
        term = DenseMatrix::from_fn(n, a.tag(), |i, j| term.get(i, j).mul(&inv_k));
        if term.entries().iter().all(RingValue::is_zero) {
            return Ok(acc);
        }
        acc = DenseMatrix::from_fn(n, a.tag(), |i, j| acc.get(i, j).add(term.get(i, j)));
    }
    if term.entries().iter().all(RingValue::is_zero) {
        Ok(acc)
    } else {
        Err(Error::ShapeMismatch("matrix is not nilpotent".into()))
    }
}

/// Digit criterion for `det M(n) = 0` with the Legendre matrix at `p = 7`.
///
/// With `m = n - 1` in base 7: zero iff some digit is 1, or some digit 2
/// has a digit other than 6 anywhere below it.
pub fn vanishing_p7(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let d = digits(n - 1, 7).expect("base 7");
    let ds = d.digits();
    if ds.contains(&1) {
        return true;
    }
    ds.iter()
        .enumerate()
        .any(|(i, &x)| x == 2 && ds[..i].iter().any(|&lower| lower != 6))
}

/// Exponent of `-2` in `det M(n)` for the Legendre matrix at `p = 3`,
/// where `d = (1, -2, -1/2)`.
pub fn legendre3_exponent(n: u64) -> i128 {
    let c = digit_counts(n, 3).expect("base 3").counts;
    c[1] as i128 - c[2] as i128
}
