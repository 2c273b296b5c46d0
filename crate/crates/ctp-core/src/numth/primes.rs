//! Factorization and primality at desk scale: trial division to 10⁶,
//! then Brent-cycle Pollard rho with perfect-power extraction.
//! Primality is certified by deterministic Miller-Rabin; a survivor
//! that cannot be split or certified within the configured effort is
//! reported as an explicit error, never as a wrong answer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const TRIAL_BOUND: u64 = 1_000_000;
/// Iterations of Brent-rho per polynomial offset before trying the next.
const RHO_ROUND: u64 = 1 << 18;
/// Number of polynomial offsets x² + c to try before giving up.
const RHO_OFFSETS: u64 = 24;

/// Sign and prime factorization of a nonzero integer, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// Multiply the factorization back together (used by tests).
    pub fn value(&self) -> BigInt {
        let mut v = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            v *= BigInt::from(p.pow(*e));
        }
        v
    }
}

/// Deterministic Miller-Rabin with the 12-base set, valid for all
/// n < 3.317·10²⁴ (Sorenson-Webster). Returns `None` when the candidate
/// is beyond the certified range.
pub fn is_certified_prime(n: &BigUint) -> Option<bool> {
    let two = BigUint::from(2u8);
    if n < &two {
        return Some(false);
    }
    if n.is_even() {
        return Some(n == &two);
    }
    // 3.3 * 10^24 bound for the base set below.
    let cap = BigUint::from(33u8) * BigUint::from(10u64).pow(23);
    if n > &cap {
        return None;
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let ab = BigUint::from(a);
        if &ab % n == BigUint::zero() {
            continue;
        }
        let mut x = ab.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return Some(false);
    }
    Some(true)
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Brent's variant of Pollard rho on a u64 composite. Deterministic:
/// the offsets c = 1, 2, … are tried in order.
fn rho_u64(n: u64) -> Option<u64> {
    debug_assert!(n.is_odd() && n > 1);
    for c in 1..=RHO_OFFSETS {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut y: u64 = 2;
        let mut cycle: u64 = 1;
        let mut q: u64 = 1;
        let mut x;
        let mut ys;
        let mut count = 0u64;
        'outer: loop {
            x = y;
            for _ in 0..cycle {
                y = f(y);
            }
            let mut k = 0;
            while k < cycle {
                ys = y;
                let chunk = 128.min(cycle - k);
                for _ in 0..chunk {
                    y = f(y);
                    q = mulmod_u64(q, x.abs_diff(y).max(1), n);
                }
                let g = q.gcd(&n);
                if g > 1 {
                    if g == n {
                        // Back up and walk one step at a time.
                        loop {
                            ys = f(ys);
                            let g = x.abs_diff(ys).max(1).gcd(&n);
                            if g > 1 {
                                if g == n {
                                    break 'outer;
                                }
                                return Some(g);
                            }
                        }
                    }
                    return Some(g);
                }
                k += chunk;
                count += chunk;
                if count > RHO_ROUND {
                    break 'outer;
                }
            }
            cycle *= 2;
        }
    }
    None
}

fn rho_big(n: &BigUint) -> Option<BigUint> {
    if let Some(n64) = n.to_u64() {
        return rho_u64(n64).map(BigUint::from);
    }
    for c in 1..=RHO_OFFSETS {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| ((x * x) + &cb) % n;
        let mut y = BigUint::from(2u8);
        let mut x;
        let mut cycle: u64 = 1;
        let mut count: u64 = 0;
        loop {
            x = y.clone();
            for _ in 0..cycle {
                y = f(&y);
            }
            let mut k = 0;
            while k < cycle {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                if !diff.is_zero() {
                    let g = diff.gcd(n);
                    if g > BigUint::one() && &g < n {
                        return Some(g);
                    }
                }
                k += 1;
                count += 1;
                if count > RHO_ROUND {
                    break;
                }
            }
            if count > RHO_ROUND {
                break;
            }
            cycle *= 2;
        }
    }
    None
}

/// Extract a perfect-power root if n = m^k for some k ≥ 2.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = n.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Prime factorization of a nonzero integer.
///
/// Trial division up to 10⁶, then recursive splitting of survivors by
/// perfect-power extraction and Pollard rho, with deterministic
/// Miller-Rabin certifying every reported prime. A survivor beyond the
/// configured effort yields [`Error::FactorizationIncomplete`].
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with_effort(n, RHO_OFFSETS)
}

/// As [`factorize`] but with an explicit rho-offset budget (used to
/// exercise the incomplete-factorization error path in tests).
pub fn factorize_with_effort(n: &BigInt, rho_offsets: u64) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();

    let push = |p: BigUint, e: u32, factors: &mut Vec<(BigUint, u32)>| {
        if let Some(slot) = factors.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            factors.push((p, e));
        }
    };

    // Trial division.
    let mut d: u64 = 2;
    while d <= TRIAL_BOUND {
        let db = BigUint::from(d);
        if &db * &db > m {
            break;
        }
        let mut e = 0;
        while (&m % &db).is_zero() {
            m /= &db;
            e += 1;
        }
        if e > 0 {
            push(db, e, &mut factors);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    // Split the survivors.
    let mut stack: Vec<(BigUint, u32)> = Vec::new();
    if !m.is_one() {
        stack.push((m, 1));
    }
    while let Some((s, mult)) = stack.pop() {
        match is_certified_prime(&s) {
            Some(true) => {
                push(s, mult, &mut factors);
                continue;
            }
            Some(false) => {}
            None => return Err(Error::FactorizationIncomplete { n: n.clone() }),
        }
        if let Some((r, k)) = perfect_power(&s) {
            stack.push((r, mult * k));
            continue;
        }
        if rho_offsets == 0 {
            return Err(Error::FactorizationIncomplete { n: n.clone() });
        }
        let g = if s.to_u64().is_some() {
            rho_u64(s.to_u64().unwrap()).map(BigUint::from)
        } else if rho_offsets < RHO_OFFSETS {
            // Reduced-effort mode for tests: a single cheap round.
            rho_limited(&s, rho_offsets)
        } else {
            rho_big(&s)
        };
        match g {
            Some(g) => {
                let other = &s / &g;
                stack.push((g, mult));
                stack.push((other, mult));
            }
            None => return Err(Error::FactorizationIncomplete { n: n.clone() }),
        }
    }

    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { sign, factors })
}

fn rho_limited(n: &BigUint, offsets: u64) -> Option<BigUint> {
    for c in 1..=offsets {
        let cb = BigUint::from(c);
        let mut x = BigUint::from(2u8);
        let mut y = x.clone();
        for _ in 0..1024u32 {
            x = ((&x * &x) + &cb) % n;
            y = ((&y * &y) + &cb) % n;
            y = ((&y * &y) + &cb) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            let g = diff.gcd(n);
            if g > BigUint::one() && &g < n {
                return Some(g);
            }
        }
    }
    None
}

/// Primes dividing n, as u64, ascending.
pub fn prime_support_u64(n: &BigInt) -> Result<Vec<u64>> {
    let f = factorize(n)?;
    f.factors
        .iter()
        .map(|(p, _)| {
            p.to_u64()
                .ok_or_else(|| Error::PrimeTooLarge { p: BigInt::from(p.clone()) })
        })
        .collect()
}
