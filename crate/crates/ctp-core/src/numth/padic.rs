//! Finite-precision model of elements of Q_p: a value is stored as
//! p^val · unit with the unit known to `prec` p-adic digits. All
//! operations track precision; a computation whose known digits cancel
//! completely surfaces as an explicit pseudo-zero error, never a
//! silent zero.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_square_local, sqrt_mod_p, val_unit, Place};
use crate::{Error, Result};

/// Hard cap on working precision (p-adic digits of the unit part).
pub const PRECISION_CAP: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicNumber {
    prime: u64,
    val: i64,
    unit: BigUint,
    prec: u32,
}

impl PAdicNumber {
    /// Build from a nonzero rational, known to `prec` digits (exactly,
    /// since the input is exact).
    pub fn from_rational(q: &BigRational, prime: u64, prec: u32) -> Result<PAdicNumber> {
        if q.is_zero() {
            return Err(Error::ZeroInput);
        }
        if prec == 0 || prec > PRECISION_CAP {
            return Err(Error::PrecisionExceeded { prime, needed: prec });
        }
        let (val, unit) = val_unit(q, prime);
        let modulus = BigUint::from(prime).pow(prec);
        let unit = rational_residue(&unit, &modulus);
        Ok(PAdicNumber { prime, val, unit, prec })
    }

    pub fn from_integer(n: &BigInt, prime: u64, prec: u32) -> Result<PAdicNumber> {
        Self::from_rational(&BigRational::from(n.clone()), prime, prec)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Unit approximant, reduced modulo prime^precision.
    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.prec)
    }

    /// Truncate to at most `prec` known digits.
    pub fn truncate(&self, prec: u32) -> PAdicNumber {
        if prec >= self.prec {
            return self.clone();
        }
        let m = BigUint::from(self.prime).pow(prec);
        PAdicNumber {
            prime: self.prime,
            val: self.val,
            unit: &self.unit % m,
            prec,
        }
    }

    pub fn neg(&self) -> PAdicNumber {
        let m = self.modulus();
        PAdicNumber {
            prime: self.prime,
            val: self.val,
            unit: (&m - (&self.unit % &m)) % &m,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &PAdicNumber) -> PAdicNumber {
        debug_assert_eq!(self.prime, other.prime);
        let prec = self.prec.min(other.prec);
        let m = BigUint::from(self.prime).pow(prec);
        PAdicNumber {
            prime: self.prime,
            val: self.val + other.val,
            unit: (&self.unit * &other.unit) % m,
            prec,
        }
    }

    /// Multiply by an exact nonzero rational (exact fields lose no digits).
    pub fn mul_rational(&self, q: &BigRational) -> Result<PAdicNumber> {
        if q.is_zero() {
            return Err(Error::ZeroInput);
        }
        let (v, u) = val_unit(q, self.prime);
        let m = self.modulus();
        Ok(PAdicNumber {
            prime: self.prime,
            val: self.val + v,
            unit: (&self.unit * rational_residue(&u, &m)) % m,
            prec: self.prec,
        })
    }

    /// Sum, with explicit accounting of cancelled digits. If every known
    /// digit cancels, the result is a pseudo-zero error: the caller must
    /// escalate precision rather than treat the value as zero.
    pub fn add(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        debug_assert_eq!(self.prime, other.prime);
        let p = self.prime;
        let (lo, hi) = if self.val <= other.val {
            (self, other)
        } else {
            (other, self)
        };
        // Known absolute precision of the sum.
        let abs_prec = (lo.val + lo.prec as i64).min(hi.val + hi.prec as i64);
        let digits = abs_prec - lo.val;
        if digits <= 0 {
            return Err(Error::PseudoZero {
                context: format!("p = {p}: no overlapping digits in sum"),
            });
        }
        let m = BigUint::from(p).pow(digits as u32);
        let shift = BigUint::from(p).pow((hi.val - lo.val) as u32);
        let sum = (&lo.unit + &hi.unit * shift) % &m;
        if sum.is_zero() {
            return Err(Error::PseudoZero {
                context: format!("p = {p}: sum vanished to {digits} digits"),
            });
        }
        // Strip the new valuation gained through cancellation.
        let mut t: u32 = 0;
        let pb = BigUint::from(p);
        let mut u = sum;
        while (&u % &pb).is_zero() {
            u /= &pb;
            t += 1;
        }
        let prec = digits as u32 - t;
        let mm = BigUint::from(p).pow(prec);
        Ok(PAdicNumber {
            prime: p,
            val: lo.val + t as i64,
            unit: u % mm,
            prec,
        })
    }

    pub fn sub(&self, other: &PAdicNumber) -> Result<PAdicNumber> {
        self.add(&other.neg())
    }

    /// Whether the two values agree on every digit both know.
    pub fn eq_to_precision(&self, other: &PAdicNumber) -> bool {
        matches!(self.sub(other), Err(Error::PseudoZero { .. }))
    }

    /// Integer representative of the square class of this value:
    /// p^(val mod 2) times the unit residue mod p (mod 8 at p = 2).
    /// Requires enough digits to pin the class.
    pub fn square_class_rep(&self) -> Result<BigInt> {
        let need = if self.prime == 2 { 3 } else { 1 };
        if self.prec < need {
            return Err(Error::PrecisionExceeded {
                prime: self.prime,
                needed: need,
            });
        }
        let m = BigUint::from(self.prime).pow(need);
        let u = BigInt::from(&self.unit % m);
        let p_part = if self.val.rem_euclid(2) == 1 {
            BigInt::from(self.prime)
        } else {
            BigInt::one()
        };
        Ok(p_part * u)
    }

    /// Whether this value is a square in Q_p (requires enough digits).
    pub fn is_square(&self) -> Result<bool> {
        let rep = self.square_class_rep()?;
        Ok(is_square_local(
            &BigRational::from(rep),
            &Place::FinitePrime(self.prime),
        ))
    }
}

impl std::fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}^{} * ({} + O({}^{}))",
            self.prime, self.val, self.unit, self.prime, self.prec
        )
    }
}

/// Residue of a p-adic-unit rational modulo `m` (a power of p).
fn rational_residue(u: &BigRational, m: &BigUint) -> BigUint {
    let mb = BigInt::from(m.clone());
    let num = u.numer().mod_floor(&mb);
    let den = u.denom().mod_floor(&mb);
    let inv = super::mod_inverse(&den, &mb).expect("denominator is a p-unit");
    ((num * inv).mod_floor(&mb)).to_biguint().unwrap()
}

/// p-adic square root of a nonzero rational to the requested relative
/// precision, or `None` exactly when the value is not a local square.
///
/// Odd p: Tonelli-Shanks for the leading digit, then Newton lifting
/// (each step doubles the correct digits). p = 2: units ≡ 1 mod 8 are
/// lifted digit by digit; the lift runs two digits past the request so
/// that sqrt(q)² ≡ q holds to the reported precision.
pub fn padic_sqrt(q: &BigRational, prime: u64, precision: u32) -> Result<Option<PAdicNumber>> {
    if q.is_zero() {
        return Err(Error::ZeroInput);
    }
    if precision == 0 || precision > PRECISION_CAP {
        return Err(Error::PrecisionExceeded {
            prime,
            needed: precision,
        });
    }
    if !is_square_local(q, &Place::FinitePrime(prime)) {
        return Ok(None);
    }
    let (val, unit) = val_unit(q, prime);
    debug_assert!(val % 2 == 0);

    let root_unit = if prime == 2 {
        let work = precision + 2;
        let m = BigUint::one() << work;
        let u = rational_residue(&unit, &m);
        // u ≡ 1 mod 8 here; fix one bit per step.
        let mut r = BigUint::one();
        let mut k = 3u32;
        while k < work {
            let mk1 = BigUint::one() << (k + 1);
            let r2 = (&r * &r) % &mk1;
            if r2 != &u % &mk1 {
                r += BigUint::one() << (k - 1);
            }
            k += 1;
        }
        r % (BigUint::one() << precision)
    } else {
        let m = BigUint::from(prime).pow(precision);
        let u = rational_residue(&unit, &m);
        let u0 = (&u % BigUint::from(prime)).to_u64().unwrap();
        let mut r = BigUint::from(sqrt_mod_p(u0, prime).expect("residue is a square"));
        let mut k = 1u32;
        while k < precision {
            k = (2 * k).min(precision);
            let mk = BigUint::from(prime).pow(k);
            let r_big = BigInt::from(r.clone());
            let inv = super::mod_inverse(&r_big, &BigInt::from(mk.clone())).unwrap();
            let u_mod = BigInt::from(&u % &mk);
            let two_inv =
                super::mod_inverse(&BigInt::from(2u8), &BigInt::from(mk.clone())).unwrap();
            let next = ((&r_big + u_mod * inv) * two_inv).mod_floor(&BigInt::from(mk.clone()));
            r = next.to_biguint().unwrap();
        }
        r
    };

    Ok(Some(PAdicNumber {
        prime,
        val: val / 2,
        unit: root_unit,
        prec: precision,
    }))
}
