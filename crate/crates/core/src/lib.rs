//! Exact arithmetic on b-self-similar matrices.
//!
//! A b-self-similar matrix is determined by a `b x b` defining matrix `D`
//! with `D[0][0] = 1`: the entry at `(s, t)` is the product of
//! `D[s_i][t_i]` over the base-`b` digits of `s` and `t`. The crate computes
//! entries, LDU factors, inverses and determinants of the `n x n` leading
//! blocks without materializing them, and provides brute-force references to
//! check every fast path.
//!
//! ```
//! use selfsim::pascal::{pascal_defining, PascalKind, PascalRing};
//! use selfsim::fastdet::det_selfsim;
//!
//! let m = pascal_defining(3, PascalKind::Legendre, PascalRing::Rational).unwrap();
//! let det = det_selfsim(&m, 9).unwrap();
//! assert_eq!(det.to_string(), "(-2)^6 * (-1/2)^6");
//! assert!(det.expand().unwrap().is_one());
//! ```

pub mod cli;
pub mod error;
pub mod exact;
pub mod fastdet;
pub mod matfile;
pub mod oracle;
pub mod pascal;
pub mod selfsim;

pub use error::{Error, Result};
pub use exact::{Fp, Poly, RatFun, Rational, RingTag, RingValue};
pub use selfsim::{DefiningMatrix, DenseMatrix};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/self-similar.md")]
    mod self_similar {}
    #[doc = include_str!("../../../book/src/ldu.md")]
    mod ldu {}
    #[doc = include_str!("../../../book/src/determinants.md")]
    mod determinants {}
    #[doc = include_str!("../../../book/src/perturbation.md")]
    mod perturbation {}
    #[doc = include_str!("../../../book/src/pascal.md")]
    mod pascal {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
