//! Certified local points on a 2-covering: exact rational witnesses
//! x_v with every (x_v − e_i)/β_i a verified local square, lifted to
//! coordinates w_i by p-adic square roots (or rational interval
//! enclosures over R), with resampling until all requested tangent
//! forms are provably nonvanishing at the point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::solvable::real_regions;
use super::TwoCovering;
use crate::conic::TangentForm;
use crate::numth::{
    is_square_local, padic_sqrt, PAdicNumber, Place, RatInterval, PRECISION_CAP,
};
use crate::{Error, Result};

/// An element of a completion of Q: p-adic with tracked precision, or a
/// real interval with exact rational endpoints.
#[derive(Debug, Clone)]
pub enum LocalValue {
    PAdic(PAdicNumber),
    Real(RatInterval),
}

impl LocalValue {
    pub fn as_padic(&self) -> Option<&PAdicNumber> {
        match self {
            LocalValue::PAdic(x) => Some(x),
            LocalValue::Real(_) => None,
        }
    }

    pub fn as_real(&self) -> Option<&RatInterval> {
        match self {
            LocalValue::Real(x) => Some(x),
            LocalValue::PAdic(_) => None,
        }
    }
}

impl std::fmt::Display for LocalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LocalValue::PAdic(x) => write!(f, "{x}"),
            LocalValue::Real(x) => write!(f, "{x}"),
        }
    }
}

/// A point 𝔮_v = (w₁ : w₂ : w₃ : T) on the covering over the completion
/// at `place`, normalized to T = 1 (affine chart, with the exact
/// witness x recorded) or T = 0 (the chart above the origin of E).
#[derive(Debug, Clone)]
pub struct LocalCoveringPoint {
    pub place: Place,
    pub w: [LocalValue; 3],
    /// Exact witness with x − e_i = β_i·w_i²; present iff T = 1.
    pub x: Option<BigRational>,
}

impl LocalCoveringPoint {
    pub fn t_coordinate(&self) -> u8 {
        if self.x.is_some() {
            1
        } else {
            0
        }
    }

    /// Evaluate a tangent form (primitive part) at this point via its
    /// (Γ₁, Γ₂, Γ₃, T) coefficients.
    pub fn eval_form(&self, form: &TangentForm) -> Result<LocalValue> {
        let g = form.gamma_coeffs().ok_or_else(|| {
            Error::Inconsistency("tangent form lacks covering provenance".into())
        })?;
        let t_coeff = if self.x.is_some() { g[3].clone() } else { BigInt::zero() };
        match &self.w[0] {
            LocalValue::PAdic(w0) => {
                let p = w0.prime();
                let prec = w0.precision();
                let mut acc: Option<PAdicNumber> = None;
                for m in 0..3 {
                    if g[m].is_zero() {
                        continue;
                    }
                    let term = self.w[m]
                        .as_padic()
                        .expect("uniform coordinate context")
                        .mul_rational(&BigRational::from(g[m].clone()))?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                if !t_coeff.is_zero() {
                    let c = PAdicNumber::from_integer(&t_coeff, p, prec)?;
                    acc = Some(match acc {
                        None => c,
                        Some(a) => a.add(&c)?,
                    });
                }
                match acc {
                    Some(v) => Ok(LocalValue::PAdic(v)),
                    None => Err(Error::PseudoZero {
                        context: "tangent form vanishes identically on chart".into(),
                    }),
                }
            }
            LocalValue::Real(_) => {
                let mut acc = RatInterval::exact(BigRational::from(t_coeff));
                for m in 0..3 {
                    if g[m].is_zero() {
                        continue;
                    }
                    let term = self.w[m]
                        .as_real()
                        .expect("uniform coordinate context")
                        .mul_rational(&BigRational::from(g[m].clone()));
                    acc = acc.add(&term);
                }
                Ok(LocalValue::Real(acc))
            }
        }
    }

    /// Check that all three covering conics vanish at the point to
    /// working precision (p-adic: the sum cancels to a pseudo-zero;
    /// real: the value interval straddles zero).
    pub fn verify_on(&self, cov: &TwoCovering) -> Result<()> {
        for (i, conic) in cov.conics().iter().enumerate() {
            let (j, k) = crate::curve::SplitCurve::cyclic_complement(i);
            match &self.w[0] {
                LocalValue::PAdic(w0) => {
                    let a = BigRational::from(conic.a.clone());
                    let b = BigRational::from(conic.b.clone());
                    let c = BigRational::from(conic.c.clone());
                    let wj = self.w[j].as_padic().unwrap();
                    let wk = self.w[k].as_padic().unwrap();
                    let t1 = wj.mul(wj).mul_rational(&a)?;
                    let t2 = wk.mul(wk).mul_rational(&b)?;
                    if self.x.is_some() {
                        // β_j w_j² − β_k w_k² = e_k − e_j exactly, so the
                        // T²-term must cancel it to a pseudo-zero.
                        let partial = t1.add(&t2)?;
                        let t3 = PAdicNumber::from_rational(&c, w0.prime(), w0.precision())?;
                        match partial.add(&t3) {
                            Err(Error::PseudoZero { .. }) => {}
                            Ok(v) => {
                                return Err(Error::Inconsistency(format!(
                                    "conic {i} does not vanish at local point: {v}"
                                )))
                            }
                            Err(e) => return Err(e),
                        }
                    } else {
                        match t1.add(&t2) {
                            Err(Error::PseudoZero { .. }) => {}
                            Ok(v) => {
                                return Err(Error::Inconsistency(format!(
                                    "conic {i} does not vanish at T=0 local point: {v}"
                                )))
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                LocalValue::Real(_) => {
                    let wj = self.w[j].as_real().unwrap();
                    let wk = self.w[k].as_real().unwrap();
                    let mut acc = wj.mul(wj).mul_rational(&BigRational::from(conic.a.clone()));
                    acc = acc.add(&wk.mul(wk).mul_rational(&BigRational::from(conic.b.clone())));
                    if self.x.is_some() {
                        acc = acc.add(&RatInterval::exact(BigRational::from(conic.c.clone())));
                    }
                    if !acc.contains_zero() {
                        return Err(Error::Inconsistency(format!(
                            "conic {i} does not vanish at real local point: {acc}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A local point on the covering at `v` with every form in `avoid`
/// provably nonvanishing at it (p-adic: value valuation below half the
/// working precision; real: value interval excluding zero).
///
/// The seed steers the retry schedule (witness order, square-root sign
/// flips, real sampling); it never affects whether a point exists.
pub fn local_point(
    cov: &TwoCovering,
    v: &Place,
    avoid: &[TangentForm],
    seed: u64,
    precision: u32,
) -> Result<LocalCoveringPoint> {
    local_point_capped(cov, v, avoid, seed, precision, PRECISION_CAP)
}

/// As [`local_point`] with an explicit ceiling on precision escalation.
pub fn local_point_capped(
    cov: &TwoCovering,
    v: &Place,
    avoid: &[TangentForm],
    seed: u64,
    precision: u32,
    cap: u32,
) -> Result<LocalCoveringPoint> {
    let cap = cap.min(PRECISION_CAP);
    match v {
        Place::RealInfinite => local_point_real(cov, avoid, seed),
        Place::FinitePrime(p) => local_point_padic(cov, *p, avoid, seed, precision.min(cap), cap),
    }
}

fn local_point_padic(
    cov: &TwoCovering,
    p: u64,
    avoid: &[TangentForm],
    seed: u64,
    precision: u32,
    cap: u32,
) -> Result<LocalCoveringPoint> {
    let place = Place::FinitePrime(p);
    let curve = cov.curve();
    let beta = cov.beta();

    // T = 0 chart: only when no avoidance is requested.
    let all_square = (0..3).all(|i| beta.get(i).is_square_at(&place));
    if avoid.is_empty() && all_square {
        let mut w = Vec::new();
        for i in 0..3 {
            let inv = BigRational::new(BigInt::one(), beta.get(i).rep().clone());
            let root = padic_sqrt(&inv, p, precision)?
                .expect("β_i is a local square");
            w.push(LocalValue::PAdic(root));
        }
        return Ok(LocalCoveringPoint {
            place,
            w: [w[0].clone(), w[1].clone(), w[2].clone()],
            x: None,
        });
    }

    let witnesses = affine_witnesses(curve, beta, p)?;
    if witnesses.is_empty() {
        return Err(Error::SearchExhausted {
            context: format!("no affine local point on {} at p = {p}", beta),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ place_stream(p));
    let mut order = witnesses.clone();
    order.shuffle(&mut rng);

    let mut prec = precision.max(8);
    loop {
        for x in &order {
            // Random sign flips give resampling some variety even from
            // a single witness.
            let flips: [bool; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let mut w: Vec<LocalValue> = Vec::new();
            for i in 0..3 {
                let q = (x - BigRational::from(curve.root(i).clone()))
                    / BigRational::from(beta.get(i).rep().clone());
                let mut root = padic_sqrt(&q, p, prec)?
                    .ok_or_else(|| Error::Inconsistency(format!("witness {x} not certified at p = {p}")))?;
                if flips[i] {
                    root = root.neg();
                }
                w.push(LocalValue::PAdic(root));
            }
            let point = LocalCoveringPoint {
                place,
                w: [w[0].clone(), w[1].clone(), w[2].clone()],
                x: Some(x.clone()),
            };
            if avoid_ok_padic(&point, avoid, prec) {
                return Ok(point);
            }
        }
        // Escalate precision before failing: pseudo-zero tolerance is
        // relative to the working precision.
        if prec >= cap {
            return Err(Error::SearchExhausted {
                context: format!(
                    "avoid-forms still vanish at precision cap (p = {p}, beta = {})",
                    beta
                ),
            });
        }
        prec = (prec * 2).min(cap);
    }
}

fn avoid_ok_padic(point: &LocalCoveringPoint, avoid: &[TangentForm], prec: u32) -> bool {
    for form in avoid {
        match point.eval_form(form) {
            Ok(LocalValue::PAdic(v)) => {
                // Nonvanishing means valuation strictly below half the
                // working precision, and the square class determined.
                if v.valuation() >= (prec / 2) as i64 || v.square_class_rep().is_err() {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Exact rational x with every (x − e_i)/β_i a local square at p,
/// gathered from the certified ball decomposition; each candidate is
/// re-verified by `is_square_local` before being admitted.
fn affine_witnesses(
    curve: &crate::curve::SplitCurve,
    beta: &crate::curve::SquareClassTriple,
    p: u64,
) -> Result<Vec<BigRational>> {
    let place = Place::FinitePrime(p);
    let mut raw: Vec<BigRational> = Vec::new();

    // Integral candidates from the ball walk.
    collect_ball_witnesses(curve, beta, p, &mut raw)?;

    // Negative-valuation candidates (x near the T = 0 chart).
    if (0..3).all(|i| beta.get(i).is_square_at(&place)) {
        let pb = BigInt::from(p);
        let mut scale = BigInt::one();
        for _ in 0..6 {
            scale *= &pb;
        }
        // x = u² / p^(2m): class of each x − e_i is the class of x.
        for m in 0..3u32 {
            let denom = (&scale * BigInt::from(p).pow(2 * m)).pow(2);
            for u in [1u64, 3, 5] {
                raw.push(BigRational::new(BigInt::from(u * u), denom.clone()));
            }
        }
    }
    if p == 2 {
        for t in 1..=2u32 {
            let denom = BigInt::from(1u8) << t;
            for u in (1..(1u64 << (t + 3))).step_by(2) {
                raw.push(BigRational::new(BigInt::from(u), denom.clone()));
            }
        }
    }

    let mut out = Vec::new();
    for x in raw {
        let ok = (0..3).all(|i| {
            let diff = &x - BigRational::from(curve.root(i).clone());
            !diff.is_zero()
                && is_square_local(
                    &(diff / BigRational::from(beta.get(i).rep().clone())),
                    &place,
                )
        });
        if ok && !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Walk the ball decomposition, emitting concrete integral witnesses
/// from fully-determined square balls and from near-root balls.
fn collect_ball_witnesses(
    curve: &crate::curve::SplitCurve,
    beta: &crate::curve::SquareClassTriple,
    p: u64,
    out: &mut Vec<BigRational>,
) -> Result<()> {
    let place = Place::FinitePrime(p);
    let k0 = if p == 2 { 3 } else { 1 };
    let pb = BigInt::from(p);
    let cap = 40usize;

    struct Frame {
        c: BigInt,
        k: u32,
        modulus: BigInt,
    }
    let mut stack = vec![Frame { c: BigInt::zero(), k: 0, modulus: BigInt::one() }];
    let depth_cap = {
        let mut d = 16;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut v = 0u32;
                let mut n = curve.root_diff(i, j);
                while (&n % &pb).is_zero() {
                    n /= &pb;
                    v += 1;
                }
                d = d.max(2 * v + 16);
            }
        }
        d
    };

    while let Some(Frame { c, k, modulus }) = stack.pop() {
        if out.len() >= cap || k > depth_cap {
            break;
        }
        let mut inside = Vec::new();
        let mut dead = false;
        let mut undetermined = false;
        for i in 0..3 {
            let diff = &c - curve.root(i);
            if diff.is_zero() || (&diff % &modulus).is_zero() {
                inside.push(i);
                continue;
            }
            let mut d = 0u32;
            let mut n = diff.clone();
            while (&n % &pb).is_zero() {
                n /= &pb;
                d += 1;
            }
            if k >= d + k0 {
                let q = BigRational::new(diff, beta.get(i).rep().clone());
                if !is_square_local(&q, &place) {
                    dead = true;
                    break;
                }
            } else {
                undetermined = true;
            }
        }
        if dead {
            continue;
        }
        if !undetermined && inside.is_empty() {
            out.push(BigRational::from(c.clone()));
            continue;
        }
        if !undetermined && inside.len() == 1 {
            // x = e_i + β_i·p^(2m)·u² stays in the ball for large m and
            // makes the i-th class a square by construction.
            let i = inside[0];
            let m0 = k.div_ceil(2) + 1;
            for m in m0..m0 + 3 {
                for u in [1u64, 2, 3] {
                    if u % p == 0 {
                        continue;
                    }
                    let x = BigRational::from(
                        curve.root(i)
                            + beta.get(i).rep() * pb.pow(2 * m) * BigInt::from(u * u),
                    );
                    out.push(x);
                }
            }
            continue;
        }
        // Split; keep enumeration bounded for very large p by only
        // following root-children plus a sample of generic children.
        let next_modulus = &modulus * &pb;
        if p <= 1000 {
            for t in 0..p {
                stack.push(Frame {
                    c: &c + &modulus * BigInt::from(t),
                    k: k + 1,
                    modulus: next_modulus.clone(),
                });
            }
        } else {
            use num_integer::Integer;
            for i in &inside {
                stack.push(Frame {
                    c: curve.root(*i).mod_floor(&next_modulus),
                    k: k + 1,
                    modulus: next_modulus.clone(),
                });
            }
            for t in 0..200u64 {
                stack.push(Frame {
                    c: &c + &modulus * BigInt::from(t),
                    k: k + 1,
                    modulus: next_modulus.clone(),
                });
            }
        }
    }
    Ok(())
}

fn local_point_real(
    cov: &TwoCovering,
    avoid: &[TangentForm],
    seed: u64,
) -> Result<LocalCoveringPoint> {
    let curve = cov.curve();
    let beta = cov.beta();
    let regions = real_regions(curve, beta);
    if regions.is_empty() {
        return Err(Error::SearchExhausted {
            context: format!("no real region for {}", beta),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ea1);

    for attempt in 0..200u32 {
        let (lo, hi) = &regions[rng.gen_range(0..regions.len())];
        let x = sample_region(lo, hi, &mut rng);
        // Skip points too close to a root only in the sense of exact
        // equality; enclosures handle near-roots fine.
        if curve.roots().iter().any(|e| BigRational::from(e.clone()) == x) {
            continue;
        }
        let mut bits = 64u32;
        'refine: loop {
            let mut w = Vec::new();
            for i in 0..3 {
                let q = (&x - BigRational::from(curve.root(i).clone()))
                    / BigRational::from(beta.get(i).rep().clone());
                if q.is_negative() {
                    return Err(Error::Inconsistency(format!(
                        "sampled x = {x} outside admissible region"
                    )));
                }
                let mut enc = RatInterval::sqrt_of(&q, bits);
                if rng.gen() {
                    enc = enc.neg();
                }
                w.push(LocalValue::Real(enc));
            }
            let point = LocalCoveringPoint {
                place: Place::RealInfinite,
                w: [w[0].clone(), w[1].clone(), w[2].clone()],
                x: Some(x.clone()),
            };
            let mut undecided = false;
            let mut ok = true;
            for form in avoid {
                match point.eval_form(form)? {
                    LocalValue::Real(val) => match val.sign() {
                        Some(0) | None => {
                            undecided = true;
                        }
                        Some(_) => {}
                    },
                    LocalValue::PAdic(_) => unreachable!("real context"),
                }
                if undecided {
                    break;
                }
            }
            if undecided {
                if bits >= 1 << 14 {
                    ok = false;
                } else {
                    bits *= 2;
                    continue 'refine;
                }
            }
            if ok {
                return Ok(point);
            }
            break 'refine;
        }
        let _ = attempt;
    }
    Err(Error::SearchExhausted {
        context: "real local point sampling exhausted".into(),
    })
}

fn sample_region(
    lo: &Option<BigInt>,
    hi: &Option<BigInt>,
    rng: &mut ChaCha8Rng,
) -> BigRational {
    let denom = BigInt::from(64);
    let jitter = BigRational::new(BigInt::from(rng.gen_range(1..64i64)), denom.clone());
    match (lo, hi) {
        (Some(l), Some(h)) => {
            // lo + (hi − lo)·j with j ∈ (0, 1).
            let l = BigRational::from(l.clone());
            let h = BigRational::from(h.clone());
            &l + (&h - &l) * jitter
        }
        (Some(l), None) => BigRational::from(l.clone()) + BigRational::one() + jitter,
        (None, Some(h)) => BigRational::from(h.clone()) - BigRational::one() - jitter,
        (None, None) => jitter,
    }
}

fn place_stream(p: u64) -> u64 {
    crate::exec::stable_hash(&[0x10ca1, p])
}
