//! Minimal field abstraction so the chord-tangent group law is written
//! once and runs over Q (exact rationals) and over prime fields F_p
//! (the finite-field oracle for the torsion-translation identities).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numth::{legendre_symbol, sqrt_mod_p};

/// Field context: operations take the context so that F_p can carry its
/// modulus without every element owning a copy.
pub trait Field: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    // Context-object style: `self` is the field, not the element.
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: &BigInt) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// None exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
}

/// The rational field Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn from_int(&self, n: &BigInt) -> BigRational {
        BigRational::from(n.clone())
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The prime field F_p for p < 2⁶³, elements reduced to [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> PrimeField {
        PrimeField { p }
    }

    /// A square root by Tonelli-Shanks, if one exists.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if self.p == 2 {
            return Some(a % 2);
        }
        sqrt_mod_p(a % self.p, self.p)
    }

    pub fn is_square(&self, a: u64) -> bool {
        a.is_multiple_of(self.p) || legendre_symbol(&BigInt::from(a), self.p) == 1
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn from_int(&self, n: &BigInt) -> u64 {
        u64::try_from(n.mod_floor(&BigInt::from(self.p))).unwrap()
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - (*b % self.p) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - (*a % self.p)
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if (*a).is_multiple_of(self.p) {
            return None;
        }
        Some(crate::numth::powmod(*a, self.p - 2, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        (*a).is_multiple_of(self.p)
    }
}
