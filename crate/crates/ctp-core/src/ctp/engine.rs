//! Pairing evaluation: global conic data, contributing places, the
//! local Hilbert-symbol factors, the δ-route cross-check, and assembly
//! of the pairing matrix with its rank bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{f2, MatrixOptions, PairingMatrix, PairingValue};
use crate::conic::{legendre_solve_seeded, tangent_form, ProjPoint, TangentForm};
use crate::curve::{SplitCurve, SquareClassTriple};
use crate::exec::{self, stable_hash};
use crate::numth::{
    hilbert_symbol, is_certified_prime, prime_support_u64, Place, RatInterval, PRECISION_CAP,
};
use crate::selmer::{
    local_point_capped, working_precision, LocalCoveringPoint, LocalValue, SelmerGroup,
    TwoCovering,
};
use crate::{Error, Result};

pub type GlobalData = [(ProjPoint, TangentForm); 3];

/// Ensure the covering's three conics carry rational points with
/// tangent forms, normalizing each global point off the T = 0 plane
/// (the δ-formulas divide by the T-coordinate). Results are cached on
/// the covering; a conic with no rational point here is a fatal
/// internal inconsistency, since the class was certified everywhere
/// locally soluble.
pub fn global_data(cov: &TwoCovering, seed: u64) -> Result<&GlobalData> {
    if let Some(gd) = cov.global_data() {
        return Ok(gd);
    }
    let mut data = Vec::with_capacity(3);
    for (i, conic) in cov.conics().iter().enumerate() {
        let q = legendre_solve_seeded(conic, stable_hash(&[seed, i as u64]))?
            .ok_or_else(|| {
                Error::Inconsistency(format!(
                    "conic {i} of Selmer element {} has no rational point",
                    cov.beta()
                ))
            })?;
        let q = ensure_t_nonzero(conic, q)?;
        let form = tangent_form(conic, &q)?;
        data.push((q, form));
    }
    let data: GlobalData = match data.try_into() {
        Ok(d) => d,
        Err(_) => unreachable!("exactly three conics"),
    };
    let _ = cov.global_data_cell().set(data);
    Ok(cov.global_data().expect("just set"))
}

/// Move a conic point off the plane T = 0 by a chord through it; the
/// conic meets that plane in at most two points, so a small direction
/// scan always succeeds.
fn ensure_t_nonzero(conic: &crate::conic::DiagonalConic, q: ProjPoint) -> Result<ProjPoint> {
    if !q.get(2).is_zero() {
        return Ok(q);
    }
    for s in 0..6i64 {
        for t in 0..6i64 {
            for u in 1..6i64 {
                let dir = [BigInt::from(s), BigInt::from(t), BigInt::from(u)];
                if let Some(p) = conic.chord_point(&q, &dir) {
                    if !p.get(2).is_zero() {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::Inconsistency(format!(
        "could not move conic point {q} off the T = 0 plane"
    )))
}

/// Places that can carry a nontrivial local factor for the pair
/// (a, a'): the real place, 2, the bad primes, the supports of both
/// triples, the primes in the tangent data (form contents and global
/// T-coordinates, which scale the δ-identity), a conditional handful of
/// small good primes where the reduction of the covering might not meet
/// the complement of the tangent planes, and any caller-supplied extras.
pub fn contributing_places(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    extra: &[u64],
) -> Result<Vec<Place>> {
    let gd = cov.global_data().ok_or_else(|| {
        Error::Inconsistency("contributing_places requires global data".into())
    })?;
    let curve = cov.curve();
    let mut primes: Vec<u64> = vec![2];
    primes.extend_from_slice(curve.bad_primes());
    for i in 0..3 {
        primes.extend(cov.beta().get(i).support()?);
        primes.extend(aprime.get(i).support()?);
        let (q, form) = &gd[i];
        primes.extend(prime_support_u64(form.content())?);
        primes.extend(prime_support_u64(q.get(2))?);
    }
    primes.extend_from_slice(extra);
    primes.sort_unstable();
    primes.dedup();

    // Small good primes: the three tangent planes can only swallow all
    // of D̃(F_p) when p + 1 − 2√p ≤ 12, i.e. p ≤ 19; scan the reduction
    // and include p exactly when no point clears all planes.
    for p in [3u64, 5, 7, 11, 13, 17, 19] {
        if primes.contains(&p) {
            continue;
        }
        if small_prime_forced(cov, gd, p) {
            primes.push(p);
        }
    }
    primes.sort_unstable();

    let mut places = vec![Place::RealInfinite];
    places.extend(primes.into_iter().map(Place::FinitePrime));
    Ok(places)
}

/// Does every F_p-point of the reduced covering lie on one of the three
/// reduced tangent planes? (Only asked at good primes, where the
/// reduction is smooth and every F_p-point lifts.)
fn small_prime_forced(cov: &TwoCovering, gd: &GlobalData, p: u64) -> bool {
    let pb = BigInt::from(p);
    let red = |n: &BigInt| -> i64 {
        use num_integer::Integer;
        i64::try_from(n.mod_floor(&pb)).unwrap()
    };
    let pi = p as i64;
    // Conic and plane data mod p, in (γ₁, γ₂, γ₃, t) coordinates.
    let mut conics_mod = Vec::new();
    for i in 0..2 {
        let (j, k) = SplitCurve::cyclic_complement(i);
        let c = &cov.conics()[i];
        conics_mod.push((j, k, red(&c.a), red(&c.b), red(&c.c)));
    }
    let planes: Vec<[i64; 4]> = (0..3)
        .map(|i| {
            let g = gd[i].1.gamma_coeffs().expect("covering provenance");
            [red(&g[0]), red(&g[1]), red(&g[2]), red(&g[3])]
        })
        .collect();

    let mut coords = [0i64; 4];
    for g1 in 0..pi {
        coords[0] = g1;
        for g2 in 0..pi {
            coords[1] = g2;
            for g3 in 0..pi {
                coords[2] = g3;
                for t in 0..pi {
                    coords[3] = t;
                    if coords == [0, 0, 0, 0] {
                        continue;
                    }
                    let on_cover = conics_mod.iter().all(|&(j, k, a, b, c)| {
                        (a * coords[j] * coords[j]
                            + b * coords[k] * coords[k]
                            + c * coords[3] * coords[3])
                            .rem_euclid(pi)
                            == 0
                    });
                    if !on_cover {
                        continue;
                    }
                    let clears_planes = planes.iter().all(|pl| {
                        (0..4)
                            .map(|m| pl[m] * coords[m])
                            .sum::<i64>()
                            .rem_euclid(pi)
                            != 0
                    });
                    if clears_planes {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Hilbert symbol with a local (finite-precision) first argument.
fn hilbert_local(value: &LocalValue, b: &BigInt, v: &Place) -> Result<i8> {
    match value {
        LocalValue::PAdic(x) => {
            let rep = x.square_class_rep()?;
            Ok(hilbert_symbol(
                &BigRational::from(rep),
                &BigRational::from(b.clone()),
                v,
            ))
        }
        LocalValue::Real(x) => match x.sign() {
            Some(0) | None => Err(Error::PseudoZero {
                context: "sign of real value undecided".into(),
            }),
            Some(s) => Ok(if s < 0 && b.is_negative() { -1 } else { 1 }),
        },
    }
}

/// One evaluated δ-identity: scale·δ_{v,i} = L_i(𝔮_v) with
/// scale = e_k − e_j.
#[derive(Debug, Clone)]
pub struct DeltaWitness {
    pub place: Place,
    pub index: usize,
    pub delta: LocalValue,
    pub tangent_value: LocalValue,
    pub scale: BigInt,
}

/// The δ-route recomputation of one local factor.
#[derive(Debug, Clone)]
pub struct DeltaCrosscheck {
    pub place: Place,
    pub witnesses: Vec<DeltaWitness>,
    /// ∏_i (δ_{v,i}, β'_i)_v.
    pub delta_factor: i8,
    /// ∏_i (T*_i · (e_k − e_j), β'_i)_v — the exact-rational scaling
    /// connecting the δ-route to the tangent-value route at this place.
    pub correction: i8,
}

/// Compute δ_{v,i} for each i at an affine local point and verify
/// scale·δ_{v,i} = L_i(𝔮_v) to working precision, plus the symbol-level
/// consistency of the two routes. A mismatch is a fatal error.
pub fn delta_crosscheck(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    point: &LocalCoveringPoint,
    cassels_factor: i8,
) -> Result<DeltaCrosscheck> {
    let gd = cov
        .global_data()
        .ok_or_else(|| Error::Inconsistency("delta cross-check requires global data".into()))?;
    if point.t_coordinate() == 0 {
        return Err(Error::Inconsistency(
            "delta cross-check is defined on the affine chart only".into(),
        ));
    }
    let curve = cov.curve();
    let beta = cov.beta();
    let v = point.place;

    let mut witnesses = Vec::new();
    let mut delta_factor: i8 = 1;
    let mut correction: i8 = 1;
    for i in 0..3 {
        let (j, k) = SplitCurve::cyclic_complement(i);
        let (q, form) = &gd[i];
        let t_star = BigRational::from(q.get(2).clone());
        let gamma_j = BigRational::from(q.get(0).clone()) / &t_star;
        let gamma_k = BigRational::from(q.get(1).clone()) / &t_star;
        let s_kj = curve.root_diff(k, j);
        let s_kj_rat = BigRational::from(s_kj.clone());

        // δ = 2 + (2β_k Γ*_k / s_kj)·w_k − (2β_j Γ*_j / s_kj)·w_j.
        let two = BigRational::from(BigInt::from(2));
        let ck = &two * BigRational::from(beta.get(k).rep().clone()) * &gamma_k / &s_kj_rat;
        let cj = -(&two * BigRational::from(beta.get(j).rep().clone()) * &gamma_j / &s_kj_rat);
        let delta = linear_in_w(point, &[(j, cj), (k, ck)], &two)?;

        // L_i(𝔮_v), the tangent value in the scale of the δ-identity:
        // −content·(primitive form at 𝔮_v)/T*.
        let prim = point.eval_form(form)?;
        let scale_factor = -BigRational::from(form.content().clone()) / &t_star;
        let tangent_value = mul_local(&prim, &scale_factor)?;

        // The identity itself, to working precision.
        let lhs = mul_local(&delta, &s_kj_rat)?;
        if !local_eq(&lhs, &tangent_value) {
            return Err(Error::Inconsistency(format!(
                "δ-identity failed at v = {v}, i = {i}: {s_kj}·{delta} ≠ {tangent_value}"
            )));
        }

        delta_factor *= hilbert_local(&delta, aprime.get(i).rep(), &v)?;
        correction *= hilbert_symbol(
            &(&t_star * &s_kj_rat),
            &BigRational::from(aprime.get(i).rep().clone()),
            &v,
        );
        witnesses.push(DeltaWitness {
            place: v,
            index: i,
            delta,
            tangent_value,
            scale: s_kj,
        });
    }

    // Symbol-level route agreement at this place: the tangent-route
    // factor equals the δ-route factor times the exact scaling symbols.
    if delta_factor * correction != cassels_factor {
        return Err(Error::Inconsistency(format!(
            "δ-route factor {delta_factor}·{correction} ≠ local factor {cassels_factor} at {v}"
        )));
    }

    Ok(DeltaCrosscheck {
        place: v,
        witnesses,
        delta_factor,
        correction,
    })
}

/// Σ coeff_m·w_m + constant at a local point (exact rational
/// coefficients).
fn linear_in_w(
    point: &LocalCoveringPoint,
    terms: &[(usize, BigRational)],
    constant: &BigRational,
) -> Result<LocalValue> {
    match &point.w[0] {
        LocalValue::PAdic(w0) => {
            let p = w0.prime();
            let prec = w0.precision();
            let mut acc = crate::numth::PAdicNumber::from_rational(constant, p, prec)?;
            for (m, coeff) in terms {
                if coeff.is_zero() {
                    continue;
                }
                let term = point.w[*m].as_padic().unwrap().mul_rational(coeff)?;
                acc = acc.add(&term)?;
            }
            Ok(LocalValue::PAdic(acc))
        }
        LocalValue::Real(_) => {
            let mut acc = RatInterval::exact(constant.clone());
            for (m, coeff) in terms {
                acc = acc.add(&point.w[*m].as_real().unwrap().mul_rational(coeff));
            }
            Ok(LocalValue::Real(acc))
        }
    }
}

fn mul_local(value: &LocalValue, q: &BigRational) -> Result<LocalValue> {
    Ok(match value {
        LocalValue::PAdic(x) => LocalValue::PAdic(x.mul_rational(q)?),
        LocalValue::Real(x) => LocalValue::Real(x.mul_rational(q)),
    })
}

fn local_eq(a: &LocalValue, b: &LocalValue) -> bool {
    match (a, b) {
        (LocalValue::PAdic(x), LocalValue::PAdic(y)) => x.eq_to_precision(y),
        (LocalValue::Real(x), LocalValue::Real(y)) => x.sub(y).contains_zero(),
        _ => false,
    }
}

/// One (element-pair, place) symbol evaluation.
#[derive(Debug, Clone)]
pub struct LocalFactorRecord {
    pub row: usize,
    pub col: usize,
    pub place: Place,
    pub factor: i8,
}

struct FactorOutcome {
    factor: i8,
    point: LocalCoveringPoint,
    crosscheck: Option<DeltaCrosscheck>,
}

/// The local factor ∏_i (L_i(𝔮_v), β'_i)_v at one place, from a fresh
/// local point avoiding the three tangent lines. Precision escalates on
/// pseudo-zeros, up to the cap.
pub fn local_factor(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    v: &Place,
    seed: u64,
) -> Result<i8> {
    Ok(local_factor_detailed(cov, aprime, v, seed)?.0)
}

/// As [`local_factor`], also returning the local point used.
pub fn local_factor_detailed(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    v: &Place,
    seed: u64,
) -> Result<(i8, LocalCoveringPoint)> {
    let gd = cov
        .global_data()
        .ok_or_else(|| Error::Inconsistency("local_factor requires global data".into()))?;
    let out = local_factor_full(cov, aprime, v, gd, seed, false)?;
    Ok((out.factor, out.point))
}

fn local_factor_full(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    v: &Place,
    gd: &GlobalData,
    seed: u64,
    with_crosscheck: bool,
) -> Result<FactorOutcome> {
    local_factor_capped(cov, aprime, v, gd, seed, with_crosscheck, PRECISION_CAP)
}

fn local_factor_capped(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    v: &Place,
    gd: &GlobalData,
    seed: u64,
    with_crosscheck: bool,
    cap: u32,
) -> Result<FactorOutcome> {
    let cap = cap.min(PRECISION_CAP);
    let base = match v {
        Place::RealInfinite => 64,
        Place::FinitePrime(p) => working_precision(cov.curve(), *p).min(cap),
    };
    let avoid: Vec<TangentForm> = gd.iter().map(|(_, f)| f.clone()).collect();
    let mut prec = base;
    let mut attempt = 0u64;
    loop {
        let result = (|| -> Result<FactorOutcome> {
            let point =
                local_point_capped(cov, v, &avoid, stable_hash(&[seed, attempt]), prec, cap)?;
            let mut factor: i8 = 1;
            for (i, (_, form)) in gd.iter().enumerate() {
                let prim = point.eval_form(form)?;
                let sym = hilbert_local(&prim, aprime.get(i).rep(), v)?;
                let content_sym = hilbert_symbol(
                    &BigRational::from(-form.content().clone()),
                    &BigRational::from(aprime.get(i).rep().clone()),
                    v,
                );
                factor *= sym * content_sym;
            }
            let crosscheck = if with_crosscheck && point.t_coordinate() == 1 {
                Some(delta_crosscheck(cov, aprime, &point, factor)?)
            } else {
                None
            };
            Ok(FactorOutcome { factor, point, crosscheck })
        })();
        match result {
            Ok(out) => return Ok(out),
            Err(Error::PseudoZero { .. }) | Err(Error::PrecisionExceeded { .. })
                if prec < cap =>
            {
                prec = (prec * 2).min(cap);
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Full evaluation record for one pair of Selmer elements.
#[derive(Debug, Clone)]
pub struct PairDetail {
    pub value: PairingValue,
    pub place_factors: Vec<(Place, i8)>,
    pub crosschecks: Vec<DeltaCrosscheck>,
}

/// Options for a single pairing evaluation.
#[derive(Debug, Clone)]
pub struct PairingOptions {
    pub seed: u64,
    pub extra_places: Vec<u64>,
    pub verify: bool,
    /// Ceiling for p-adic precision escalation (≤ the global cap).
    pub precision_cap: u32,
}

impl Default for PairingOptions {
    fn default() -> Self {
        PairingOptions {
            seed: 0,
            extra_places: Vec::new(),
            verify: false,
            precision_cap: PRECISION_CAP,
        }
    }
}

/// ⟨a, a'⟩ for two elements of the Selmer group, as an element of
/// ½Z/Z: the product over contributing places of the local factors.
pub fn pair(
    selmer: &SelmerGroup,
    a: &SquareClassTriple,
    aprime: &SquareClassTriple,
    opts: &PairingOptions,
) -> Result<PairingValue> {
    Ok(pair_detailed(selmer, a, aprime, opts)?.value)
}

pub fn pair_detailed(
    selmer: &SelmerGroup,
    a: &SquareClassTriple,
    aprime: &SquareClassTriple,
    opts: &PairingOptions,
) -> Result<PairDetail> {
    if !selmer.contains(a) || !selmer.contains(aprime) {
        return Err(Error::Inconsistency(
            "pairing is only defined on Selmer elements".into(),
        ));
    }
    let cov = TwoCovering::new(selmer.curve(), a.clone());
    global_data(&cov, stable_hash(&[opts.seed, 0x91]))?;
    pair_with_covering(&cov, aprime, opts, opts.seed)
}

fn pair_with_covering(
    cov: &TwoCovering,
    aprime: &SquareClassTriple,
    opts: &PairingOptions,
    entry_seed: u64,
) -> Result<PairDetail> {
    let gd = cov.global_data().expect("global data computed");
    let places = contributing_places(cov, aprime, &opts.extra_places)?;
    let mut bit = false;
    let mut place_factors = Vec::new();
    let mut crosschecks = Vec::new();
    for v in &places {
        let place_seed = stable_hash(&[entry_seed, place_code(v)]);
        let out = local_factor_capped(cov, aprime, v, gd, place_seed, opts.verify, opts.precision_cap)?;
        bit ^= out.factor == -1;
        place_factors.push((*v, out.factor));

        if opts.verify {
            // The factor must not depend on the choice of local point.
            for resample in 1..=3u64 {
                let again = local_factor_capped(
                    cov,
                    aprime,
                    v,
                    gd,
                    stable_hash(&[entry_seed, place_code(v), resample]),
                    false,
                    opts.precision_cap,
                )?;
                if again.factor != out.factor {
                    return Err(Error::Inconsistency(format!(
                        "local factor at {v} changed under resampling: {} vs {}",
                        out.factor, again.factor
                    )));
                }
            }
        }
        if let Some(check) = out.crosscheck {
            crosschecks.push(check);
        }
    }

    if opts.verify && crosschecks.len() == place_factors.len() {
        // Route agreement over the whole place set: the exact-rational
        // corrections multiply to +1 by the product formula (the place
        // set contains their full support), so the δ-route product
        // equals the pairing itself.
        let corr: i8 = crosschecks.iter().map(|c| c.correction).product();
        let delta_total: i8 = crosschecks.iter().map(|c| c.delta_factor).product();
        let cassels_total: i8 = place_factors.iter().map(|(_, f)| f).product();
        if corr != 1 || delta_total != cassels_total {
            return Err(Error::Inconsistency(format!(
                "route mismatch: δ-route {delta_total}, Cassels {cassels_total}, correction {corr}"
            )));
        }
    }

    Ok(PairDetail {
        value: PairingValue::from_sign(if bit { -1 } else { 1 }),
        place_factors,
        crosschecks,
    })
}

fn place_code(v: &Place) -> u64 {
    match v {
        Place::RealInfinite => 1,
        Place::FinitePrime(p) => *p << 1,
    }
}

/// The full pairing matrix on the Selmer basis, with kernel and rank
/// bounds. Entries are computed independently (in parallel under the
/// default strategy) and merged in (row, col, place) order, so output
/// depends only on the seed.
pub fn pairing_matrix(selmer: &SelmerGroup, opts: &MatrixOptions) -> Result<PairingMatrix> {
    let matrix = assemble(selmer, opts, opts.seed, &opts.extra_places)?;
    if opts.verify {
        // Choice independence: re-solved conics and different local
        // points (a different seed stream) and an enlarged place set
        // must reproduce the matrix bit for bit.
        let reseeded = assemble(selmer, opts, stable_hash(&[opts.seed, 0xa11]), &opts.extra_places)?;
        if reseeded.rows != matrix.rows {
            return Err(Error::Inconsistency(
                "pairing matrix changed under re-solved conics / local points".into(),
            ));
        }
        let mut enlarged = opts.extra_places.clone();
        enlarged.extend(good_probe_primes(selmer.curve(), opts.seed, 5));
        let wider = assemble(selmer, opts, opts.seed, &enlarged)?;
        if wider.rows != matrix.rows {
            return Err(Error::Inconsistency(
                "pairing matrix changed under place-set enlargement".into(),
            ));
        }
    }
    matrix.check_structure()?;
    Ok(matrix)
}

fn assemble(
    selmer: &SelmerGroup,
    opts: &MatrixOptions,
    seed: u64,
    extra_places: &[u64],
) -> Result<PairingMatrix> {
    let n = selmer.dim();
    let basis = selmer.basis().to_vec();

    // One covering per basis element, with global data solved up front.
    let covs: Vec<TwoCovering> = basis
        .iter()
        .map(|b| TwoCovering::new(selmer.curve(), b.clone()))
        .collect();
    for (r, cov) in covs.iter().enumerate() {
        global_data(cov, stable_hash(&[seed, 0x9d, r as u64]))?;
    }

    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for r in 0..n {
        for c in r..n {
            jobs.push((r, c));
        }
    }
    let pair_opts = PairingOptions {
        seed,
        extra_places: extra_places.to_vec(),
        verify: opts.verify,
        precision_cap: opts.precision_cap,
    };
    let results: Vec<Result<PairDetail>> = exec::map_collect(opts.exec, &jobs, |&(r, c)| {
        let entry_seed = stable_hash(&[seed, r as u64, c as u64]);
        let mut detail = pair_with_covering(&covs[r], &basis[c], &pair_opts, entry_seed)?;
        if opts.verify && r != c {
            // Symmetry: evaluate with the roles of a and a' swapped.
            let swapped = pair_with_covering(
                &covs[c],
                &basis[r],
                &pair_opts,
                stable_hash(&[seed, c as u64, r as u64, 0x5]),
            )?;
            if swapped.value != detail.value {
                return Err(Error::Inconsistency(format!(
                    "pairing not symmetric at ({r}, {c})"
                )));
            }
            detail.crosschecks.extend(swapped.crosschecks);
        }
        Ok(detail)
    });

    let mut rows = vec![0u64; n];
    let mut local_log = Vec::new();
    for ((r, c), result) in jobs.into_iter().zip(results) {
        let detail = result?;
        if detail.value.bit() {
            rows[r] |= 1 << c;
            rows[c] |= 1 << r;
        }
        for (place, factor) in &detail.place_factors {
            local_log.push(LocalFactorRecord {
                row: r,
                col: c,
                place: *place,
                factor: *factor,
            });
        }
    }

    let kernel_basis = f2::kernel(&rows, n);
    let kernel_dim = kernel_basis.len();
    Ok(PairingMatrix {
        basis,
        rows,
        kernel_basis,
        kernel_dim,
        naive_rank_bound: (n as u32).saturating_sub(2),
        refined_rank_bound: (kernel_dim as u32).saturating_sub(2),
        local_log,
    })
}

/// Deterministic pseudo-random good odd primes for the place-set
/// enlargement check.
pub fn good_probe_primes(curve: &SplitCurve, seed: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut state = stable_hash(&[seed, 0x600d]);
    while out.len() < count {
        state = stable_hash(&[state]);
        let candidate = 100 + state % 5000;
        if is_certified_prime(&candidate.into()) == Some(true)
            && !curve.bad_primes().contains(&candidate)
            && !out.contains(&candidate)
        {
            out.push(candidate);
        }
    }
    out.sort_unstable();
    out
}

impl PairingMatrix {
    /// Whether a Selmer element (not necessarily a basis vector) pairs
    /// to zero with the entire group.
    pub fn kernel_contains(&self, selmer: &SelmerGroup, t: &SquareClassTriple) -> Option<bool> {
        let coords = selmer.coordinates(t)?;
        Some(self.in_kernel(&coords))
    }
}
