//! Dense univariate polynomials with [`Rational`] coefficients.
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the zero polynomial is the empty coefficient vector. Every public
//! operation preserves that normal form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactqError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// Ascending integer coefficients; test-friendly constructor.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| super::rat_int(c)).collect())
    }

    /// The monic linear factor `x - r`.
    pub fn linear(r: &Rational) -> Self {
        RatPoly::new(vec![-r.clone(), Rational::one()])
    }

    /// Monic product of `x - r` over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut p = RatPoly::one();
        for r in roots {
            p = &p * &RatPoly::linear(r);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from(BigInt::from(k)))
            .collect();
        RatPoly::new(coeffs)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Monic rescaling. Errors on the zero polynomial.
    pub fn monic(&self) -> Result<RatPoly, ExactqError> {
        let lead = self.leading().ok_or(ExactqError::ZeroPolynomial)?;
        Ok(self.scale(&lead.recip()))
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &RatPoly) -> Result<(RatPoly, RatPoly), ExactqError> {
        let dl = d.leading().ok_or(ExactqError::DivisionByZero)?;
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let f = &rem[k] / dl;
            for j in 0..dd {
                let t = &f * &d.coeffs[j];
                rem[k - dd + j] -= t;
            }
            rem[k] = Rational::zero();
            quot[k - dd] = f;
        }
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Synthetic division by `x - r`: `Some(quotient)` iff `r` is a root.
    pub fn deflate(&self, r: &Rational) -> Option<RatPoly> {
        if self.is_zero() {
            return None;
        }
        let n = self.coeffs.len();
        let mut quot = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for k in (1..n).rev() {
            carry = &self.coeffs[k] + &carry * r;
            quot[k - 1] = carry.clone();
        }
        let rem = &self.coeffs[0] + carry * r;
        rem.is_zero().then(|| RatPoly::new(quot))
    }

    /// Divides by `x^k`; all stripped coefficients must be zero.
    pub(crate) fn shift_down(&self, k: usize) -> RatPoly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        RatPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Primitive integer form: contents divided out, leading coefficient
    /// positive. Same roots as `self`. Errors on the zero polynomial.
    pub(crate) fn primitive_integers(&self) -> Result<Vec<BigInt>, ExactqError> {
        if self.is_zero() {
            return Err(ExactqError::ZeroPolynomial);
        }
        let mut scale = BigInt::one();
        for c in &self.coeffs {
            scale = scale.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&scale / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        Ok(ints.iter().map(|v| v / &content).collect())
    }

    /// Ascending coefficient strings, the exchange form used in reports.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

// Arithmetic on references; owned variants delegate.

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        RatPoly::new(out)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        RatPoly::new(out)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Add for RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: RatPoly) -> RatPoly {
        &self + &rhs
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self - &rhs
    }
}

impl Mul for RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: RatPoly) -> RatPoly {
        &self * &rhs
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{rat, rat_int};

    fn p(coeffs: &[i64]) -> RatPoly {
        RatPoly::from_integers(coeffs)
    }

    #[test]
    fn normal_form_trims_trailing_zeros() {
        let q = RatPoly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(q.degree(), Some(0));
        assert!(RatPoly::new(vec![rat_int(0)]).is_zero());
        assert_eq!(RatPoly::zero().degree(), None);
    }

    #[test]
    fn arithmetic_basics() {
        let a = p(&[1, 1]); // x + 1
        let b = p(&[-1, 1]); // x - 1
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a + &b, p(&[0, 2]));
        assert_eq!(&a - &a, RatPoly::zero());
        assert_eq!(-&b, p(&[1, -1]));
    }

    #[test]
    fn eval_horner() {
        let q = p(&[1, -2, 1]); // (x-1)^2
        assert_eq!(q.eval(&rat_int(1)), rat_int(0));
        assert_eq!(q.eval(&rat(3, 2)), rat(1, 4));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[2, -3, 0, 1]);
        let d = p(&[-1, 1]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree() < d.degree() || r.is_zero());
        assert!(p(&[1]).div_rem(&RatPoly::zero()).is_err());
    }

    #[test]
    fn deflate_detects_roots() {
        let q = p(&[-2, 1, 0, 0]); // x - 2 with trailing zero input
        assert_eq!(q.degree(), Some(1));
        let cubic = &(&q * &q) * &RatPoly::linear(&rat_int(0)); // x(x-2)^2
        let defl = cubic.deflate(&rat_int(2)).unwrap();
        assert_eq!(defl.eval(&rat_int(2)), rat_int(0));
        assert!(cubic.deflate(&rat_int(3)).is_none());
    }

    #[test]
    fn primitive_integer_form() {
        // x^3 - 3x^2 + 9/4 x -> 4x^3 - 12x^2 + 9x, content 1, leading > 0
        let q = RatPoly::new(vec![rat_int(0), rat(9, 4), rat_int(-3), rat_int(1)]);
        let ints = q.primitive_integers().unwrap();
        let as_i64: Vec<i64> = ints.iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(as_i64, vec![0, 9, -12, 4]);

        // negative leading flips sign
        let q = RatPoly::new(vec![rat_int(2), rat_int(-4)]);
        let ints = q.primitive_integers().unwrap();
        let as_i64: Vec<i64> = ints.iter().map(|v| i64::try_from(v).unwrap()).collect();
        assert_eq!(as_i64, vec![-1, 2]);
    }

    #[test]
    fn monic_and_derivative() {
        let q = RatPoly::new(vec![rat_int(2), rat_int(0), rat_int(4)]);
        assert_eq!(
            q.monic().unwrap(),
            RatPoly::new(vec![rat(1, 2), rat_int(0), rat_int(1)])
        );
        assert_eq!(q.derivative(), p(&[0, 8]));
        assert!(RatPoly::zero().monic().is_err());
    }

    #[test]
    fn display_format() {
        assert_eq!(p(&[0, -2, 1]).to_string(), "x^2 - 2*x");
        assert_eq!(
            RatPoly::new(vec![rat_int(0), rat(9, 4), rat_int(-3), rat_int(1)]).to_string(),
            "x^3 - 3*x^2 + 9/4*x"
        );
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(p(&[1]).to_string(), "1");
        assert_eq!(p(&[-1, 0, -1]).to_string(), "-x^2 - 1");
    }
}
