//! Quadratic Hilbert symbols (a, b)_v over Q by the classical closed
//! forms: the Legendre-symbol formula at odd primes, the ε/ω exponent
//! formula at p = 2, and the sign rule at the real place. Never by
//! search — the brute-force solvability oracle lives in test code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{primes::powmod_u64, val_unit, Place};

/// Legendre symbol (a | p) for odd prime p: +1, −1, or 0 when p | a.
pub fn legendre_symbol(a: &BigInt, p: u64) -> i8 {
    debug_assert!(p > 2);
    let r = (a % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
    let r = u64::try_from(r).unwrap();
    legendre_u64(r, p)
}

pub(crate) fn legendre_u64(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = powmod_u64(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Square root of a modulo an odd prime p by Tonelli-Shanks, or `None`
/// for a non-residue.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    debug_assert!(p > 2);
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod_u64(a, (p + 1) / 4, p));
    }
    // Factor p − 1 = q · 2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    // Any quadratic non-residue serves as the initial generator.
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod_u64(z, q, p);
    let mut t = powmod_u64(a, q, p);
    let mut r = powmod_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = ((t2 as u128 * t2 as u128) % p as u128) as u64;
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = ((b as u128 * b as u128) % p as u128) as u64;
        }
        m = i;
        c = ((b as u128 * b as u128) % p as u128) as u64;
        t = ((t as u128 * c as u128) % p as u128) as u64;
        r = ((r as u128 * b as u128) % p as u128) as u64;
    }
    Some(r)
}

/// Whether a nonzero rational is a square in the completion at `v`.
///
/// At the real place this is the sign. At a finite prime p it is even
/// valuation together with the unit-part condition: a residue square
/// mod p for odd p, and ≡ 1 mod 8 at p = 2.
pub fn is_square_local(q: &BigRational, v: &Place) -> bool {
    debug_assert!(!q.is_zero());
    match v {
        Place::RealInfinite => q.is_positive(),
        Place::FinitePrime(p) => {
            let (val, unit) = val_unit(q, *p);
            if val % 2 != 0 {
                return false;
            }
            if *p == 2 {
                unit_residue(&unit, 2, 8) == 1
            } else {
                let r = unit_residue(&unit, *p, *p);
                legendre_u64(r, *p) == 1
            }
        }
    }
}

/// Residue of a p-adic unit rational modulo `m` (a power of p).
fn unit_residue(unit: &BigRational, p: u64, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let num = ((unit.numer() % &mb) + &mb) % &mb;
    let den = ((unit.denom() % &mb) + &mb) % &mb;
    let num = u64::try_from(num).unwrap();
    let den = u64::try_from(den).unwrap();
    let inv = inverse_mod_prime_power(den, p, m);
    ((num as u128 * inv as u128) % m as u128) as u64
}

/// Inverse of a unit modulo p^k (m = p^k ≤ u64) by Hensel-lifted
/// Fermat/Newton iteration.
fn inverse_mod_prime_power(a: u64, p: u64, m: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    // Newton: x ← x(2 − ax) doubles the number of correct digits.
    let mut x: u64 = inverse_mod_prime(a % p, p);
    let mut modulus = p;
    while modulus < m {
        modulus = modulus.saturating_mul(modulus).min(m);
        let ax = (a as u128 * x as u128) % modulus as u128;
        let two_minus = (2u128 + modulus as u128 - ax) % modulus as u128;
        x = ((x as u128 * two_minus) % modulus as u128) as u64;
    }
    x % m
}

fn inverse_mod_prime(a: u64, p: u64) -> u64 {
    if p == 2 {
        1
    } else {
        powmod_u64(a, p - 2, p)
    }
}

fn eps_mod2(u: u64) -> u32 {
    // (u − 1)/2 mod 2 for odd u: 0 when u ≡ 1 (4), 1 when u ≡ 3 (4).
    ((u % 4) / 2) as u32
}

fn omega_mod2(u: u64) -> u32 {
    // (u² − 1)/8 mod 2 for odd u: 0 when u ≡ ±1 (8), 1 when u ≡ ±3 (8).
    match u % 8 {
        1 | 7 => 0,
        3 | 5 => 1,
        _ => unreachable!("omega of even argument"),
    }
}

/// Quadratic Hilbert symbol (a, b)_v over Q: +1 iff z² = a x² + b y²
/// has a nontrivial solution over the completion at v.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: &Place) -> i8 {
    debug_assert!(!a.is_zero() && !b.is_zero());
    match v {
        Place::RealInfinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::FinitePrime(2) => {
            let (alpha, u) = val_unit(a, 2);
            let (beta, w) = val_unit(b, 2);
            let ur = unit_residue(&u, 2, 8);
            let wr = unit_residue(&w, 2, 8);
            let exponent = eps_mod2(ur) * eps_mod2(wr)
                + (alpha.rem_euclid(2) as u32) * omega_mod2(wr)
                + (beta.rem_euclid(2) as u32) * omega_mod2(ur);
            if exponent.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Place::FinitePrime(p) => {
            let (alpha, u) = val_unit(a, *p);
            let (beta, w) = val_unit(b, *p);
            let ur = unit_residue(&u, *p, *p);
            let wr = unit_residue(&w, *p, *p);
            let mut sym: i8 = 1;
            // (−1)^{αβ·(p−1)/2} · (u|p)^β · (w|p)^α
            if alpha % 2 != 0 && beta % 2 != 0 && (p - 1) / 2 % 2 == 1 {
                sym = -sym;
            }
            if beta % 2 != 0 {
                sym *= legendre_u64(ur, *p);
            }
            if alpha % 2 != 0 {
                sym *= legendre_u64(wr, *p);
            }
            sym
        }
    }
}

/// [`hilbert_symbol`] on integer arguments.
pub fn hilbert_symbol_int(a: &BigInt, b: &BigInt, v: &Place) -> i8 {
    hilbert_symbol(
        &BigRational::from(a.clone()),
        &BigRational::from(b.clone()),
        v,
    )
}
