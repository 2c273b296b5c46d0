//! Exact integer and rational arithmetic utilities: factorization,
//! square classes, Hilbert symbols at all places of Q, p-adic numbers
//! with tracked relative precision, and rational interval arithmetic.
//!
//! Everything here is a pure function of its inputs; all values are
//! immutable after construction and safe to share across threads.

mod hilbert;
mod interval;
mod padic;
mod primes;

pub use hilbert::{hilbert_symbol, hilbert_symbol_int, is_square_local, legendre_symbol, sqrt_mod_p};
pub use interval::RatInterval;
pub use padic::{padic_sqrt, PAdicNumber, PRECISION_CAP};
pub use primes::{factorize, factorize_with_effort, is_certified_prime, prime_support_u64, Factorization};
pub use primes::powmod_u64 as powmod;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// A place of Q: the real place or a finite prime.
///
/// The derived order (real place first, then primes ascending) is the
/// canonical place ordering used when assembling deterministic output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    RealInfinite,
    FinitePrime(u64),
}

impl Place {
    /// Construct a finite place, verifying primality.
    pub fn finite(p: u64) -> Result<Place> {
        if is_certified_prime(&p.into()) == Some(true) {
            Ok(Place::FinitePrime(p))
        } else {
            Err(Error::Inconsistency(format!("{p} is not prime")))
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Place::RealInfinite => None,
            Place::FinitePrime(p) => Some(*p),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::FinitePrime(_))
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::RealInfinite => write!(f, "oo"),
            Place::FinitePrime(p) => write!(f, "{p}"),
        }
    }
}

/// An element of Q^×/(Q^×)², represented by its unique squarefree
/// integer representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    rep: BigInt,
}

impl SquareClass {
    /// Wrap an integer that is already known squarefree (debug-checked).
    pub(crate) fn from_squarefree(rep: BigInt) -> SquareClass {
        debug_assert!(!rep.is_zero());
        SquareClass { rep }
    }

    pub fn one() -> SquareClass {
        SquareClass { rep: BigInt::one() }
    }

    pub fn rep(&self) -> &BigInt {
        &self.rep
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// Product in Q^×/(Q^×)². For squarefree a, b the representative of
    /// the product class is (a/g)·(b/g) with g = gcd(a, b); no
    /// factorization is needed.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.rep.gcd(&other.rep);
        SquareClass {
            rep: (&self.rep / &g) * (&other.rep / &g),
        }
    }

    /// Whether this class is a square in the completion at `v`.
    pub fn is_square_at(&self, v: &Place) -> bool {
        is_square_local(&BigRational::from(self.rep.clone()), v)
    }

    /// Primes dividing the representative.
    pub fn support(&self) -> Result<Vec<u64>> {
        prime_support_u64(&self.rep)
    }
}

impl std::fmt::Display for SquareClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// The squarefree part of a nonzero rational: the unique squarefree
/// integer d with q/d a rational square.
pub fn squarefree_part(q: &BigRational) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    // n/d and n·d differ by the square d², so share a square class.
    let nd = q.numer() * q.denom();
    let f = factorize(&nd)?;
    let mut rep = BigInt::from(f.sign);
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            rep *= BigInt::from(p.clone());
        }
    }
    Ok(SquareClass { rep })
}

/// Valuation and unit part of a nonzero rational at a finite prime:
/// q = p^val · unit with unit a p-adic unit.
pub fn val_unit(q: &BigRational, p: u64) -> (i64, BigRational) {
    debug_assert!(!q.is_zero());
    let pb = BigInt::from(p);
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    let mut val: i64 = 0;
    while (&num % &pb).is_zero() {
        num /= &pb;
        val += 1;
    }
    while (&den % &pb).is_zero() {
        den /= &pb;
        val -= 1;
    }
    (val, BigRational::new(num, den))
}

/// Residue of a p-adically integral rational with p-unit denominator,
/// modulo `modulus` (a power of p): numerator times inverse denominator.
pub fn residue_mod(q: &BigRational, modulus: &BigInt) -> BigInt {
    let num = q.numer().mod_floor(modulus);
    let den = q.denom().mod_floor(modulus);
    let inv = mod_inverse(&den, modulus).expect("denominator must be a unit");
    (num * inv).mod_floor(modulus)
}

/// Inverse of a modulo m, when gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests;
