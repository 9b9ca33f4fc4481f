//! Integer factorization support for the rational root sieve.
//!
//! Deterministic for a given input: fixed Miller-Rabin bases, fixed Pollard
//! rho parameter sequence. Inputs are coefficient-sized integers (divisor
//! candidates for root numerators and denominators), not cryptographic.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Positive divisors of `|n|` in ascending order. `n` must be nonzero.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mag = n.magnitude().clone();
    assert!(!mag.is_zero(), "divisors of zero are unbounded");
    let factors = factorize(mag);
    let mut divs: Vec<BigUint> = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.into_iter().map(BigInt::from).collect()
}

/// Prime factorization of a positive integer.
pub(crate) fn factorize(mut n: BigUint) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    if n.is_one() {
        return out;
    }
    // Small trial division clears the common case completely.
    for p in SMALL_PRIMES {
        let p = BigUint::from(*p);
        while (&n % &p).is_zero() {
            *out.entry(p.clone()).or_insert(0) += 1;
            n /= &p;
        }
        if n.is_one() {
            return out;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out
}

const SMALL_PRIMES: &[u32] = &[
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Miller-Rabin. Deterministic below 2^64 with the standard 12-base set;
/// above that the same fixed bases give a probabilistic test with error
/// far below any failure mode of this crate.
pub(crate) fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = &one + &one;
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in MR_BASES {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const MR_BASES: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in MR_BASES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Floyd-cycle Pollard rho; returns a nontrivial factor of composite `n`.
fn pollard_rho(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u64() {
        return BigUint::from(pollard_rho_u64(small));
    }
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            if x == y {
                break; // cycle without factor; retry with next c
            }
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g > one && &g < n {
                return g;
            }
        }
    }
    unreachable!("pollard rho exhausted parameter space");
}

fn pollard_rho_u64(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        loop {
            x = f(x);
            y = f(f(y));
            if x == y {
                break;
            }
            let g = x.abs_diff(y).gcd(&n);
            if g > 1 && g < n {
                return g;
            }
        }
    }
    unreachable!("pollard rho exhausted parameter space");
}
