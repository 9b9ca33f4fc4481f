//! Rational root extraction and polynomial gcd over `Q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::factor::divisors;
use super::{ExactqError, RatPoly, Rational};

/// Splits `p` into its rational roots (with multiplicity) and the rational-
/// root-free remainder factor.
///
/// The product of `(x - r)^mult` over the returned map times the remainder
/// equals `p` exactly; in particular the remainder carries the leading
/// coefficient of `p` and is constant iff `p` splits over `Q`.
pub fn rational_roots(p: &RatPoly) -> Result<(BTreeMap<Rational, usize>, RatPoly), ExactqError> {
    rational_roots_bounded(p, None)
}

/// [`rational_roots`] restricted to a candidate window.
///
/// `window = Some((lo, hi))` asserts that every rational root of `p` lies in
/// `[lo, hi]`; candidates outside are never evaluated. The caller owns that
/// assertion (walk spectra live in `[0, 2]`), and the result is identical to
/// the unbounded call whenever it holds.
pub fn rational_roots_bounded(
    p: &RatPoly,
    window: Option<(&Rational, &Rational)>,
) -> Result<(BTreeMap<Rational, usize>, RatPoly), ExactqError> {
    if p.is_zero() {
        return Err(ExactqError::ZeroPolynomial);
    }
    let mut roots = BTreeMap::new();
    let mut work = p.clone();

    // Factors of x come off first so the integer form has a nonzero constant.
    let zeros = work.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.insert(Rational::zero(), zeros);
        work = work.shift_down(zeros);
    }
    if work.degree() == Some(0) {
        return Ok((roots, work));
    }

    let ints = work.primitive_integers()?;
    let constant = ints.first().unwrap().clone();
    let leading = ints.last().unwrap().clone();
    // Divisibility sieves: if p/q is a root of the integer form P then
    // (q - p) | P(1) and (q + p) | P(-1).
    let at_one: BigInt = ints.iter().sum();
    let at_minus_one: BigInt = ints
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c })
        .sum();

    let p_divs = divisors(&constant); // ascending
    let q_divs = divisors(&leading);
    let mut candidates: Vec<Rational> = Vec::new();
    for q in &q_divs {
        // Window bounds translate to integer caps on the numerator, so the
        // divisor list is cut by binary search instead of rational compares.
        let pos_limit = match window {
            Some((_, hi)) => numerator_cap(hi, q, &p_divs),
            None => p_divs.len(),
        };
        let neg_limit = match window {
            Some((lo, _)) if lo.is_negative() => numerator_cap(&-lo, q, &p_divs),
            Some(_) => 0,
            None => p_divs.len(),
        };
        for (idx, pd) in p_divs.iter().enumerate() {
            if idx >= pos_limit && idx >= neg_limit {
                break;
            }
            if !pd.gcd(q).is_one() {
                continue; // unreduced duplicate of a smaller pair
            }
            if idx < pos_limit && passes_sieves(pd, q, &at_one, &at_minus_one) {
                candidates.push(Rational::new(pd.clone(), q.clone()));
            }
            if idx < neg_limit && passes_sieves(&-pd, q, &at_one, &at_minus_one) {
                candidates.push(Rational::new(-pd, q.clone()));
            }
        }
    }

    for cand in candidates {
        let mut mult = 0usize;
        while let Some(quot) = work.deflate(&cand) {
            work = quot;
            mult += 1;
        }
        if mult > 0 {
            roots.insert(cand, mult);
        }
    }

    debug_assert_eq!(
        {
            let mut check = work.clone();
            for (r, m) in &roots {
                for _ in 0..*m {
                    check = &check * &RatPoly::linear(r);
                }
            }
            check
        },
        *p
    );
    Ok((roots, work))
}

/// Index bound into ascending `divs` for numerators `<= bound * q`.
fn numerator_cap(bound: &Rational, q: &BigInt, divs: &[BigInt]) -> usize {
    let cap = (bound * Rational::from(q.clone())).floor().to_integer();
    divs.partition_point(|d| *d <= cap)
}

fn passes_sieves(numer: &BigInt, q: &BigInt, at_one: &BigInt, at_minus_one: &BigInt) -> bool {
    let s1 = q - numer;
    if !s1.is_zero() && !(at_one % &s1).is_zero() {
        return false;
    }
    let s2 = q + numer;
    if !s2.is_zero() && !(at_minus_one % &s2).is_zero() {
        return false;
    }
    true
}

/// Monic greatest common divisor via the Euclidean remainder chain.
///
/// Each remainder is rescaled monic before reuse, so coefficient growth
/// stays bounded by the inputs. Coprime inputs yield the constant `1`.
pub fn poly_gcd(p: &RatPoly, q: &RatPoly) -> Result<RatPoly, ExactqError> {
    if p.is_zero() && q.is_zero() {
        return Err(ExactqError::BothZero);
    }
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    let mut a = p.monic()?;
    let mut b = q.monic()?;
    while !b.is_zero() {
        let (_, mut r) = a.div_rem(&b)?;
        if !r.is_zero() {
            r = r.monic()?;
        }
        a = b;
        b = r;
    }
    a.monic()
}
