//! Exact dense linear algebra over the rationals.
//!
//! Matrices here are small (one per graph, order = vertex count), so the
//! representation is a plain row-major `Vec`. The characteristic polynomial
//! and Krylov routines scale the matrix to integer entries first; coefficient
//! growth then stays in `BigInt` arithmetic instead of rational gcd churn.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactq::{RatPoly, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("zero vector has no local minimal polynomial")]
    ZeroVector,
    #[error("eigenvalue {theta} is not in the supplied support set")]
    RootNotInSet { theta: Rational },
    #[error("support set does not annihilate the vector")]
    RootSetMismatch,
}

/// Dense square matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    /// `entries` is row-major of length `n * n`; `n >= 1`.
    pub fn new(n: usize, entries: Vec<Rational>) -> Self {
        assert!(n > 0, "matrix order must be positive");
        assert_eq!(entries.len(), n * n, "entry count must be n^2");
        RatMatrix { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        RatMatrix::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.n, "vector length must match matrix order");
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(m, x)| !m.is_zero() && !x.is_zero())
                    .map(|(m, x)| m * x)
                    .sum()
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.n, other.n, "matrix orders must match");
        let n = self.n;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        RatMatrix::new(n, entries)
    }
}

/// Least common multiple of the entry denominators; always `>= 1`.
fn denominator_lcm(entries: &[Rational]) -> BigInt {
    entries
        .iter()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
}

/// Entries of `d * m` as integers; exact because `d` clears every denominator.
fn scaled_integer_entries(m: &RatMatrix, d: &BigInt) -> Vec<BigInt> {
    m.entries()
        .iter()
        .map(|e| {
            let scaled = e * Rational::from(d.clone());
            debug_assert!(scaled.denom().is_one());
            scaled.to_integer()
        })
        .collect()
}

fn int_trace(m: &[BigInt], n: usize) -> BigInt {
    (0..n).map(|i| &m[i * n + i]).sum()
}

fn int_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = &a[i * n + k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                let bkj = &b[k * n + j];
                if !bkj.is_zero() {
                    out[i * n + j] += aik * bkj;
                }
            }
        }
    }
    out
}

/// Characteristic polynomial `det(xI - M)`, monic of degree `n`.
///
/// Faddeev-LeVerrier over the integer matrix `B = dM`: the trace division at
/// step `k` is exact over `Z`, and the integer coefficients descale as
/// `c_i(M) = c_i(B) / d^(n-i)`.
pub fn char_poly(m: &RatMatrix) -> RatPoly {
    let n = m.n();
    let d = denominator_lcm(m.entries());
    let b = scaled_integer_entries(m, &d);

    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = b.clone();
    c[n - 1] = -int_trace(&mk, n);
    for k in 1..n {
        for i in 0..n {
            mk[i * n + i] += &c[n - k];
        }
        mk = int_mul(&b, &mk, n);
        let (q, r) = int_trace(&mk, n).div_rem(&BigInt::from(k as u64 + 1));
        debug_assert!(r.is_zero());
        c[n - k - 1] = -q;
    }

    let mut coeffs = vec![Rational::zero(); n + 1];
    let mut pow = BigInt::one();
    for i in (0..=n).rev() {
        coeffs[i] = Rational::new(c[i].clone(), pow.clone());
        if i > 0 {
            pow *= &d;
        }
    }
    RatPoly::new(coeffs)
}

/// Minimal monic `p` with `p(M) v = 0`.
///
/// Krylov vectors of the integer matrix `B = sM` are reduced by ordered
/// Gaussian elimination with combination tracking; the first dependency gives
/// the annihilator of `v` under `B`, which descales by `s^(deg - i)` per
/// coefficient. Degree is at most `n`, so the loop always terminates.
pub fn local_min_poly(m: &RatMatrix, v: &[Rational]) -> Result<RatPoly, LinalgError> {
    let n = m.n();
    assert_eq!(v.len(), n, "vector length must match matrix order");
    if v.iter().all(Zero::is_zero) {
        return Err(LinalgError::ZeroVector);
    }
    let s = denominator_lcm(m.entries());
    let b = scaled_integer_entries(m, &s);
    let int_mul_vec = |w: &[Rational]| -> Vec<Rational> {
        (0..n)
            .map(|i| {
                b[i * n..(i + 1) * n]
                    .iter()
                    .zip(w)
                    .filter(|(m, x)| !m.is_zero() && !x.is_zero())
                    .map(|(m, x)| Rational::from(m.clone()) * x)
                    .sum()
            })
            .collect()
    };

    // basis rows keep insertion order; each is reduced against its
    // predecessors, so sequential elimination never revives a cleared pivot
    let mut basis: Vec<(usize, Vec<Rational>, Vec<Rational>)> = Vec::new();
    let mut w = v.to_vec();
    loop {
        let k = basis.len();
        debug_assert!(k <= n);
        let mut r = w.clone();
        let mut combo = vec![Rational::zero(); k + 1];
        combo[k] = Rational::one();
        for (pivot, bv, bc) in &basis {
            if r[*pivot].is_zero() {
                continue;
            }
            let factor = &r[*pivot] / &bv[*pivot];
            for (ri, bi) in r.iter_mut().zip(bv) {
                if !bi.is_zero() {
                    *ri -= &factor * bi;
                }
            }
            for (ci, di) in combo.iter_mut().zip(bc) {
                *ci -= &factor * di;
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                basis.push((pivot, r, combo));
                w = int_mul_vec(&w);
            }
            None => {
                let mut coeffs = combo;
                let mut pow = Rational::one();
                for i in (0..k).rev() {
                    pow *= Rational::from(s.clone());
                    coeffs[i] /= &pow;
                }
                return Ok(RatPoly::new(coeffs));
            }
        }
    }
}

/// Component of `v` in the `theta` eigenspace of `M`, by Lagrange
/// interpolation over `support`.
///
/// `support` must cover every eigenvalue appearing in `v`; the result is
/// checked to satisfy `(M - theta I) w = 0` and a leftover means the support
/// set was incomplete.
pub fn lagrange_project(
    m: &RatMatrix,
    v: &[Rational],
    theta: &Rational,
    support: &BTreeSet<Rational>,
) -> Result<Vec<Rational>, LinalgError> {
    let n = m.n();
    assert_eq!(v.len(), n, "vector length must match matrix order");
    if !support.contains(theta) {
        return Err(LinalgError::RootNotInSet {
            theta: theta.clone(),
        });
    }
    let mut w = v.to_vec();
    let mut denom = Rational::one();
    for mu in support.iter().filter(|mu| *mu != theta) {
        let mw = m.mul_vec(&w);
        for (wi, mi) in w.iter_mut().zip(mw) {
            *wi = mi - mu * &*wi;
        }
        denom *= theta - mu;
    }
    for wi in w.iter_mut() {
        *wi /= &denom;
    }
    let mw = m.mul_vec(&w);
    let annihilated = w
        .iter()
        .zip(&mw)
        .all(|(wi, mi)| mi - theta * wi == Rational::zero());
    if !annihilated {
        return Err(LinalgError::RootSetMismatch);
    }
    Ok(w)
}
