//! Exact local solvability of the covering x − e_i = β_i·w_i² (i = 1,2,3).
//!
//! Finite places: the x-line Z_p is split adaptively into balls
//! c + p^k·Z_p. On a ball that stays away from e_i by margin k0
//! (k0 = 1 for odd p, 3 for p = 2), the square class of (x − e_i)/β_i
//! is constant because 1 + p^k0·Z_p consists of squares; so each ball
//! either fails a pinned class (dead), passes all three (witness), or
//! must be split near a root. Negative x-valuations reduce to the
//! all-β-square test (odd p) or a finite scan (p = 2), and the T = 0
//! chart has points exactly when every β_i is a local square.
//!
//! The real place is a sign-region analysis on exact integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::curve::{SplitCurve, SquareClassTriple};
use crate::numth::{is_square_local, legendre_symbol, Place};
use crate::{Error, Result};

/// Primes up to this bound split balls by plain child enumeration; above
/// it, the structured step (parity + merged character conditions) runs
/// with no enumeration.
const ENUMERATION_BOUND: u64 = 1000;

/// Whether the 2-covering attached to (curve, beta) has a point over
/// the completion at `v`.
pub fn is_locally_soluble_raw(
    curve: &SplitCurve,
    beta: &SquareClassTriple,
    v: &Place,
) -> Result<bool> {
    match v {
        Place::RealInfinite => Ok(soluble_at_infinity(curve, beta)),
        Place::FinitePrime(p) => soluble_at_prime(curve, beta, *p),
    }
}

/// Admissible sign regions at the real place: open intervals between
/// the sorted roots (and beyond) where sign(x − e_i) = sign(β_i) for
/// all i, plus the roots themselves (where w_i = 0 is allowed).
pub(crate) fn real_regions(
    curve: &SplitCurve,
    beta: &SquareClassTriple,
) -> Vec<(Option<BigInt>, Option<BigInt>)> {
    let mut sorted = curve.roots().clone();
    sorted.sort();
    let mut regions = Vec::new();
    let bounds: [(Option<&BigInt>, Option<&BigInt>); 4] = [
        (None, Some(&sorted[0])),
        (Some(&sorted[0]), Some(&sorted[1])),
        (Some(&sorted[1]), Some(&sorted[2])),
        (Some(&sorted[2]), None),
    ];
    for (lo, hi) in bounds {
        // sign(x − e_i) on this region: x exceeds exactly the roots ≤ lo.
        let admissible = curve.roots().iter().enumerate().all(|(i, e)| {
            let above = match lo {
                Some(l) => e <= l,
                None => false,
            };
            let sign_matches = if above {
                beta.get(i).rep().is_positive()
            } else {
                beta.get(i).rep().is_negative()
            };
            sign_matches
        });
        if admissible {
            regions.push((lo.cloned(), hi.cloned()));
        }
    }
    regions
}

fn soluble_at_infinity(curve: &SplitCurve, beta: &SquareClassTriple) -> bool {
    if !real_regions(curve, beta).is_empty() {
        return true;
    }
    // x = e_i with w_i = 0: only the other two sign conditions apply.
    // (If this succeeds, a one-sided neighborhood of e_i succeeds too,
    // so the open regions above already caught it; kept for clarity.)
    for i in 0..3 {
        let ok = (0..3).filter(|&m| m != i).all(|m| {
            let d = curve.root_diff(i, m);
            (d * beta.get(m).rep()).is_positive()
        });
        if ok {
            return true;
        }
    }
    false
}

/// v_p and unit part of a nonzero integer.
fn val_unit_int(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut u = n.clone();
    let mut v = 0u32;
    while (&u % &pb).is_zero() {
        u /= &pb;
        v += 1;
    }
    (v, u)
}

struct BallCtx<'a> {
    p: u64,
    pb: BigInt,
    k0: u32,
    e: &'a [BigInt; 3],
    beta_val: [u32; 3],
    beta_unit: [BigInt; 3],
    depth_cap: u32,
}

impl BallCtx<'_> {
    /// Square class test for a determined value (x − e_i)/β_i where
    /// x − e_i has valuation `d` and unit part `unit`.
    fn class_is_square(&self, i: usize, d: u32, unit: &BigInt) -> bool {
        if (d as i64 - self.beta_val[i] as i64) % 2 != 0 {
            return false;
        }
        if self.p == 2 {
            // Units mod 8 are self-inverse, so u/w ≡ 1 (8) ⟺ u ≡ w (8).
            let m = BigInt::from(8);
            ((unit - &self.beta_unit[i]) % m).is_zero()
        } else {
            legendre_symbol(&(unit * &self.beta_unit[i]), self.p) == 1
        }
    }
}

fn soluble_at_prime(curve: &SplitCurve, beta: &SquareClassTriple, p: u64) -> Result<bool> {
    let place = Place::FinitePrime(p);
    // T = 0 chart (equivalently x of arbitrarily negative valuation):
    // points exist iff every β_i is a local square.
    if (0..3).all(|i| beta.get(i).is_square_at(&place)) {
        return Ok(true);
    }
    // Negative x-valuation, p = 2, shallow denominators: x = u/2^t for
    // t ∈ {1, 2}. (For t ≥ 3, and for every t ≥ 1 at odd p, the class
    // of x − e_i equals the class of x, and a common square class for
    // all β_i·x forces all β_i square — handled above.)
    if p == 2 {
        for t in 1..=2u32 {
            let denom = BigInt::from(1u8) << t;
            let bound = 1u64 << (t + 3);
            for u in (1..bound).step_by(2) {
                let x = BigRational::new(BigInt::from(u), denom.clone());
                let ok = (0..3).all(|i| {
                    let val = &x - BigRational::from(curve.root(i).clone());
                    let q = val / BigRational::from(beta.get(i).rep().clone());
                    is_square_local(&q, &place)
                });
                if ok {
                    return Ok(true);
                }
            }
        }
    }

    let mut beta_val = [0u32; 3];
    let mut beta_unit = [BigInt::one(), BigInt::one(), BigInt::one()];
    for i in 0..3 {
        let (v, u) = val_unit_int(beta.get(i).rep(), p);
        beta_val[i] = v;
        beta_unit[i] = u;
    }
    let mut depth_cap = 12;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (v, _) = val_unit_int(&curve.root_diff(i, j), p);
            depth_cap = depth_cap.max(2 * v + 12);
        }
    }
    let ctx = BallCtx {
        p,
        pb: BigInt::from(p),
        k0: if p == 2 { 3 } else { 1 },
        e: curve.roots(),
        beta_val,
        beta_unit,
        depth_cap,
    };
    ball_soluble(&ctx, &BigInt::zero(), 0, &BigInt::one())
}

/// Decide solvability within the ball x ≡ c (mod p^k); `modulus` = p^k.
fn ball_soluble(ctx: &BallCtx, c: &BigInt, k: u32, modulus: &BigInt) -> Result<bool> {
    if k > ctx.depth_cap {
        return Err(Error::Inconsistency(format!(
            "ball recursion exceeded depth {} at p = {}",
            ctx.depth_cap, ctx.p
        )));
    }
    let mut inside: Vec<usize> = Vec::new();
    let mut undetermined = false;
    for i in 0..3 {
        let diff = c - &ctx.e[i];
        if diff.is_zero() || (&diff % modulus).is_zero() {
            inside.push(i);
            continue;
        }
        let (d, unit) = val_unit_int(&diff, ctx.p);
        if k >= d + ctx.k0 {
            // Class constant on the ball.
            if !ctx.class_is_square(i, d, &unit) {
                return Ok(false);
            }
        } else {
            undetermined = true;
        }
    }
    if !undetermined {
        if inside.is_empty() {
            // All three classes pinned and square: c is a witness.
            return Ok(true);
        }
        if inside.len() == 1 {
            // The two outside classes are pinned square; x can approach
            // e_i inside the ball with (x − e_i)/β_i = p^{2m}·(unit)²,
            // so the remaining condition is satisfiable.
            return Ok(true);
        }
    }

    // Split into children.
    let next_modulus = modulus * &ctx.pb;
    if ctx.p <= ENUMERATION_BOUND {
        for t in 0..ctx.p {
            let child = c + modulus * BigInt::from(t);
            if ball_soluble(ctx, &child, k + 1, &next_modulus)? {
                return Ok(true);
            }
        }
        return Ok(false);
    }

    // Large odd p (k0 = 1, so only inside roots are unresolved).
    debug_assert!(ctx.p > 2 && !undetermined);
    // Shifts s_i = (c − e_i)/p^k mod p for the inside roots.
    let mut shifts: Vec<(usize, u64)> = Vec::new();
    for &i in &inside {
        let s = ((c - &ctx.e[i]) / modulus).mod_floor(&ctx.pb);
        shifts.push((i, u64::try_from(s).unwrap()));
    }
    if generic_child_exists(ctx, k, &shifts) {
        return Ok(true);
    }
    // Only root-containing children remain.
    let mut root_children: Vec<BigInt> = Vec::new();
    for &i in &inside {
        let child = ctx.e[i].mod_floor(&next_modulus);
        if !root_children.contains(&child) {
            root_children.push(child);
        }
    }
    for child in root_children {
        if ball_soluble(ctx, &child, k + 1, &next_modulus)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Does a child ball avoiding every inside root carry a solution? All
/// outside classes are already pinned square; on such a child the class
/// of (x − e_i)/β_i for each inside root i is determined by the parity
/// of k − v_p(β_i) and the residue character χ((t + s_i)·u_i).
fn generic_child_exists(ctx: &BallCtx, k: u32, shifts: &[(usize, u64)]) -> bool {
    let p = ctx.p;
    // Parity of valuation must work out for every inside root.
    for &(i, _) in shifts {
        if (k as i64 - ctx.beta_val[i] as i64) % 2 != 0 {
            return false;
        }
    }
    // Merge roots sharing a shift: conditions χ((t+s)u_i) = 1 for all i
    // in a group are simultaneously satisfiable iff the u_i agree up to
    // squares; then one representative condition remains.
    let mut groups: Vec<(u64, BigInt)> = Vec::new();
    for &(i, s) in shifts {
        let u = &ctx.beta_unit[i];
        if let Some((_, w)) = groups.iter().find(|(s0, _)| *s0 == s) {
            if legendre_symbol(&(w * u), p) != 1 {
                return false;
            }
        } else {
            groups.push((s, u.clone()));
        }
    }
    let forbidden: Vec<u64> = shifts.iter().map(|&(_, s)| (p - s % p) % p).collect();

    // ≤ 3 distinct conditions χ((t+a_r)·w_r) = 1 on t ∈ F_p, avoiding
    // ≤ 3 forbidden values. A Weil-bound count gives
    //   N ≥ (p − 3 − 5√p − 21)/8 − 3 > 0 for p ≥ 101,
    // and this path only runs for p > ENUMERATION_BOUND.
    debug_assert!(p > 101);
    for t in 0..64u64 {
        // Cheap direct try first (nearly always hits immediately).
        if forbidden.contains(&t) {
            continue;
        }
        let ok = groups.iter().all(|(s, w)| {
            let arg = (BigInt::from(t) + BigInt::from(*s)) * w;
            legendre_symbol(&arg, p) == 1
        });
        if ok {
            return true;
        }
    }
    // Unreachable for p above the Weil threshold; fall back honestly.
    for t in 64..p {
        if forbidden.contains(&t) {
            continue;
        }
        let ok = groups.iter().all(|(s, w)| {
            let arg = (BigInt::from(t) + BigInt::from(*s)) * w;
            legendre_symbol(&arg, p) == 1
        });
        if ok {
            return true;
        }
    }
    false
}
