//! Exact arithmetic: big rationals, word-sized prime fields, polynomials in
//! `t` over Q and their fraction field Q(t).

mod fp;
mod poly;
mod ratfun;
mod ring;

pub use fp::{is_prime, Fp};
pub use poly::Poly;
pub use ratfun::{order_at_zero, ratfun_reduce, ring_eval_at_zero, OrderAtZero, RatFun};
pub use ring::{RingTag, RingValue};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;
