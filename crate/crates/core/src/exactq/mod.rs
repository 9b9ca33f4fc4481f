//! Exact rational scalars and dense univariate polynomials over `Q`.
//!
//! The scalar type is [`Rational`] (arbitrary-precision, always reduced,
//! denominator positive). Everything downstream that decides anything works
//! in this arithmetic; floats never enter this module.

mod factor;
mod poly;
mod roots;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use poly::RatPoly;
pub use roots::{poly_gcd, rational_roots, rational_roots_bounded};

/// Arbitrary-precision rational number, always reduced, denominator >= 1.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactqError {
    #[error("zero polynomial has no root decomposition")]
    ZeroPolynomial,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("empty input set")]
    EmptyInput,
    #[error("scaled value {m}*{theta} is not an integer")]
    NonIntegerScale { theta: Rational, m: BigInt },
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("invalid rational literal `{0}`")]
    BadLiteral(String),
}

/// Shorthand constructor used across the crate and its tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `p` or `p/q` with arbitrary-precision parts. Rejects `q = 0`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactqError> {
    let bad = || ExactqError::BadLiteral(s.to_string());
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let numer: BigInt = num_s.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = den_s.trim().parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Least common multiple of the denominators of `values`.
///
/// The result is a positive integer; it is the smallest `m` such that
/// `m * v` is an integer for every input value.
pub fn lcm_denominators(values: &[Rational]) -> Result<BigInt, ExactqError> {
    if values.is_empty() {
        return Err(ExactqError::EmptyInput);
    }
    let mut acc = BigInt::one();
    for v in values {
        acc = acc.lcm(v.denom());
    }
    Ok(acc)
}

/// Gcd of the integers `m * v` over the input set; zero entries are neutral.
///
/// Every `m * v` must already be an integer (use [`lcm_denominators`] to
/// obtain such an `m`); a non-integer scale is reported exactly.
pub fn gcd_scaled(values: &[Rational], m: &BigInt) -> Result<BigInt, ExactqError> {
    if values.is_empty() {
        return Err(ExactqError::EmptyInput);
    }
    let mut acc = BigInt::zero();
    for v in values {
        let scaled = v * Rational::from(m.clone());
        if !scaled.is_integer() {
            return Err(ExactqError::NonIntegerScale {
                theta: v.clone(),
                m: m.clone(),
            });
        }
        acc = acc.gcd(&scaled.to_integer().abs());
    }
    Ok(acc)
}
