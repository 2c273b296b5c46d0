//! Rational interval arithmetic for the real place. Every real
//! quantity in the pipeline is a sign decision in disguise, so
//! enclosures with exact rational endpoints keep those decisions
//! rigorous with no floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A closed interval [lo, hi] with exact rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RatInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> RatInterval {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn exact(q: BigRational) -> RatInterval {
        RatInterval { lo: q.clone(), hi: q }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    pub fn sub(&self, other: &RatInterval) -> RatInterval {
        self.add(&other.neg())
    }

    pub fn mul_rational(&self, q: &BigRational) -> RatInterval {
        if q.is_negative() {
            RatInterval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            RatInterval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    /// Definite sign of every point in the interval: +1, −1, or 0 for
    /// the exact zero interval; `None` when the interval straddles 0
    /// and the sign is undecided at this width.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Enclosure of √q for a nonnegative rational, with absolute width
    /// at most 2^−bits.
    pub fn sqrt_of(q: &BigRational, bits: u32) -> RatInterval {
        debug_assert!(!q.is_negative());
        if q.is_zero() {
            return RatInterval::exact(BigRational::zero());
        }
        // √(n/d) = √(n·d)/d; enclose √(n·d) between consecutive
        // integers after scaling by 4^bits.
        let n = q.numer().magnitude();
        let d = q.denom().magnitude();
        let scaled: BigUint = (n * d) << (2 * bits);
        let r = scaled.sqrt();
        let denom = BigInt::from(d << bits);
        let lo = BigRational::new(BigInt::from(r.clone()), denom.clone());
        let hi = BigRational::new(BigInt::from(r + BigUint::one()), denom);
        RatInterval { lo, hi }
    }
}

impl std::fmt::Display for RatInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
