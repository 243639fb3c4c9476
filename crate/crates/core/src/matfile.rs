//! Text format for defining matrices.
//!
//! ```text
//! # comment lines start with '#'
//! base 3
//! ring q            # or: ring gf 7 | ring qt
//! 1 1 1
//! 1 -1 0
//! 1 0 0
//! ```
//!
//! Tokens are integers, fractions `a/b`, or polynomials in `t` written
//! `poly:[c0;c1;...]` (ascending coefficients, each an integer or fraction),
//! optionally over a second polynomial: `poly:[...]/[...]`. A polynomial
//! token in a `ring q` file lifts the whole matrix to Q(t).

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Fp, Poly, RatFun, Rational, RingTag, RingValue};
use crate::selfsim::DefiningMatrix;

enum Token {
    Scalar(Rational),
    Function(RatFun),
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    /// Whitespace-separated tokens with their 1-based columns. A `#` ends
    /// the line.
    fn tokens(&self) -> Vec<(usize, &str)> {
        let body = self.text.split('#').next().unwrap_or("");
        let mut out = Vec::new();
        let mut start = None;
        for (i, c) in body.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    out.push((s + 1, &body[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((s + 1, &body[s..]));
        }
        out
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    match s.split_once('/') {
        Some((a, b)) => {
            let a = parse_int(a).ok_or_else(|| format!("bad numerator in '{s}'"))?;
            let b = parse_int(b).ok_or_else(|| format!("bad denominator in '{s}'"))?;
            if b == BigInt::from(0) {
                return Err(format!("zero denominator in '{s}'"));
            }
            Ok(Rational::new(a, b))
        }
        None => parse_int(s)
            .map(Rational::from_integer)
            .ok_or_else(|| format!("expected a number, got '{s}'")),
    }
}

fn parse_coeff_list(s: &str) -> std::result::Result<Poly, String> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("expected [c0;c1;...], got '{s}'"))?;
    if inner.trim().is_empty() {
        return Ok(Poly::zero());
    }
    inner
        .split(';')
        .map(|c| parse_rational(c.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Poly::new)
}

fn parse_token(s: &str) -> std::result::Result<Token, String> {
    let Some(body) = s.strip_prefix("poly:") else {
        return parse_rational(s).map(Token::Scalar);
    };
    let (num, den) = match body.find("]/[") {
        Some(i) => (&body[..=i], &body[i + 2..]),
        None => (body, "[1]"),
    };
    let num = parse_coeff_list(num)?;
    let den = parse_coeff_list(den)?;
    RatFun::reduce(num, den)
        .map(Token::Function)
        .map_err(|_| format!("zero denominator polynomial in '{s}'"))
}

/// Parses the text of a matrix file.
pub fn parse_defining_file(text: &str) -> Result<DefiningMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, text)| Line {
            number: i + 1,
            text,
        })
        .filter(|l| !l.tokens().is_empty());

    let eof = |what: &str| Error::parse(text.lines().count() + 1, 1, format!("missing {what}"));

    let header = lines.next().ok_or_else(|| eof("'base' line"))?;
    let base = match header.tokens().as_slice() {
        [(_, "base"), (col, b)] => {
            b.parse::<usize>().ok().filter(|&b| b >= 2).ok_or_else(|| {
                Error::parse(
                    header.number,
                    *col,
                    format!("base must be an integer >= 2, got '{b}'"),
                )
            })?
        }
        _ => return Err(Error::parse(header.number, 1, "expected 'base <b>'")),
    };

    let ring_line = lines.next().ok_or_else(|| eof("'ring' line"))?;
    let tag = match ring_line.tokens().as_slice() {
        [(_, "ring"), (_, "q")] => RingTag::Rational,
        [(_, "ring"), (_, "qt")] => RingTag::RationalFunction,
        [(_, "ring"), (_, "gf"), (col, p)] => {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::parse(ring_line.number, *col, format!("bad modulus '{p}'")))?;
            if !crate::exact::is_prime(p) {
                return Err(Error::parse(
                    ring_line.number,
                    *col,
                    format!("{p} is not prime"),
                ));
            }
            RingTag::PrimeField(p)
        }
        _ => {
            return Err(Error::parse(
                ring_line.number,
                1,
                "expected 'ring q', 'ring gf <p>' or 'ring qt'",
            ))
        }
    };

    let mut entries = Vec::with_capacity(base * base);
    for row in 0..base {
        let line = lines
            .next()
            .ok_or_else(|| eof(&format!("matrix row {}", row + 1)))?;
        let tokens = line.tokens();
        if tokens.len() != base {
            let col = tokens.get(base).map_or(1, |t| t.0);
            return Err(Error::parse(
                line.number,
                col,
                format!("expected {base} entries, found {}", tokens.len()),
            ));
        }
        for (col, tok) in tokens {
            let parsed = parse_token(tok).map_err(|m| Error::parse(line.number, col, m))?;
            let value = match (tag, parsed) {
                (RingTag::Rational, Token::Scalar(q)) => RingValue::Q(q),
                (RingTag::RationalFunction, Token::Scalar(q)) => {
                    RingValue::Qt(RatFun::from_rational(q))
                }
                (RingTag::Rational | RingTag::RationalFunction, Token::Function(f)) => {
                    RingValue::Qt(f)
                }
                (RingTag::PrimeField(p), Token::Scalar(q)) => {
                    let num = Fp::new(p, bigint_mod(q.numer(), p))?;
                    let den = Fp::new(p, bigint_mod(q.denom(), p))?;
                    let inv = den.inv().ok_or_else(|| {
                        Error::parse(
                            line.number,
                            col,
                            format!("denominator of '{tok}' vanishes mod {p}"),
                        )
                    })?;
                    RingValue::Gf(num.mul(&inv))
                }
                (RingTag::PrimeField(_), Token::Function(_)) => {
                    return Err(Error::parse(
                        line.number,
                        col,
                        "polynomial entries need ring q or qt",
                    ))
                }
            };
            entries.push(value);
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::parse(
            extra.number,
            1,
            "unexpected content after the matrix",
        ));
    }
    DefiningMatrix::from_flat(base, entries)
}

fn bigint_mod(x: &BigInt, p: u64) -> i128 {
    let r = x % BigInt::from(p);
    i128::try_from(r).expect("remainder fits")
}

fn write_rational(out: &mut String, q: &Rational) {
    let _ = write!(out, "{q}");
}

fn write_poly_list(out: &mut String, p: &Poly) {
    out.push('[');
    for (i, c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        write_rational(out, c);
    }
    out.push(']');
}

fn write_token(out: &mut String, v: &RingValue) {
    match v {
        RingValue::Q(q) => write_rational(out, q),
        RingValue::Gf(x) => {
            let _ = write!(out, "{}", x.value());
        }
        RingValue::Qt(f) => match f.as_constant() {
            Some(c) => write_rational(out, &c),
            None => {
                out.push_str("poly:");
                write_poly_list(out, f.numer());
                if !f.denom().is_one() {
                    out.push('/');
                    write_poly_list(out, f.denom());
                }
            }
        },
    }
}

/// Serializes a defining matrix; [`parse_defining_file`] reads it back to an
/// equal matrix.
pub fn write_defining_file(m: &DefiningMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "base {}", m.base());
    let _ = writeln!(out, "ring {}", m.tag());
    for row in m.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            write_token(&mut out, v);
        }
        out.push('\n');
    }
    out
}
