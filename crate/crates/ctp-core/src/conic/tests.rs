use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::*;
use crate::curve::SplitCurve;
use crate::numth::squarefree_part;
use crate::oracles::conic_point_search;

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn conic(a: i64, b: i64, c: i64) -> DiagonalConic {
    DiagonalConic::new(BigInt::from(a), BigInt::from(b), BigInt::from(c)).unwrap()
}

fn curve(e: [i64; 3]) -> SplitCurve {
    SplitCurve::from_roots(&int(e[0]), &int(e[1]), &int(e[2])).unwrap()
}

fn triple(b1: i64, b2: i64, b3: i64) -> SquareClassTriple {
    SquareClassTriple::new(
        squarefree_part(&int(b1)).unwrap(),
        squarefree_part(&int(b2)).unwrap(),
        squarefree_part(&int(b3)).unwrap(),
    )
    .unwrap()
}

#[test]
fn conic_for_examples() {
    let c = curve([-1, 0, 1]);
    // i = 1 (0-indexed 0): (j,k) = (2,3): β₂Γ₂² − β₃Γ₃² + (e₂−e₃)T².
    let h1 = conic_for(&c, &triple(1, -1, -1), 0);
    assert_eq!((&h1.a, &h1.b, &h1.c), (&BigInt::from(-1), &BigInt::from(1), &BigInt::from(-1)));

    let h1 = conic_for(&c, &triple(1, 1, 1), 0);
    assert_eq!((&h1.a, &h1.b, &h1.c), (&BigInt::from(1), &BigInt::from(-1), &BigInt::from(-1)));
}

#[test]
fn conics_sum_to_zero_as_forms() {
    // Σ_i (e_j−e_k)·H_i = 0: with the (e_j−e_k)-scaled conics this is
    // literally C₁ + C₂ + C₃ = 0 coefficientwise in (Γ₁,Γ₂,Γ₃,T)-space.
    for (e, b) in [
        ([-1i64, 0, 1], (1i64, -1i64, -1i64)),
        ([-6, 0, 6], (3, -3, -1)),
        ([-5, 2, 3], (2, 5, 10)),
    ] {
        let c = curve(e);
        let beta = triple(b.0, b.1, b.2);
        let mut gamma_sq = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        let mut t_sq = BigInt::zero();
        for i in 0..3 {
            let h = conic_for(&c, &beta, i);
            let (j, k) = SplitCurve::cyclic_complement(i);
            gamma_sq[j] += &h.a;
            gamma_sq[k] += &h.b;
            t_sq += &h.c;
        }
        assert!(gamma_sq.iter().all(|v| v.is_zero()) && t_sq.is_zero());
    }
}

#[test]
fn legendre_solvable_examples() {
    assert!(legendre_solvable(&conic(1, 1, -1)).unwrap());
    assert!(!legendre_solvable(&conic(1, 1, 1)).unwrap());
    assert!(!legendre_solvable(&conic(1, -2, -3)).unwrap());
}

#[test]
fn legendre_solve_examples() {
    let c = conic(1, 1, -1);
    let p = legendre_solve(&c).unwrap().unwrap();
    assert!(c.contains(&p));

    let c = conic(1, -2, -1);
    let p = legendre_solve(&c).unwrap().unwrap();
    assert!(c.contains(&p));

    assert_eq!(legendre_solve(&conic(1, -2, -3)).unwrap(), None);
}

#[test]
fn legendre_solve_matches_search_on_small_grid() {
    // Small slice of the acceptance grid: every decision agrees with
    // exhaustive search, every point substitutes to zero.
    for a in 1..=6i64 {
        for b in -6..=6i64 {
            for c in -6..=6i64 {
                if b == 0 || c == 0 {
                    continue;
                }
                let conic = conic(a, b, c);
                let solvable = legendre_solvable(&conic).unwrap();
                let found = conic_point_search(a, b, c, 60);
                if let Some((x, y, z)) = found {
                    assert!(
                        solvable,
                        "search found ({x},{y},{z}) on ({a},{b},{c}) but solver says no"
                    );
                }
                match legendre_solve(&conic).unwrap() {
                    Some(p) => {
                        assert!(solvable);
                        assert!(conic.contains(&p), "({a},{b},{c}): {p}");
                    }
                    None => assert!(!solvable && found.is_none()),
                }
            }
        }
    }
}

#[test]
fn solver_point_is_seed_dependent_but_always_valid() {
    let c = conic(3, -5, -7);
    let mut seen = std::collections::HashSet::new();
    for seed in 0..6u64 {
        let p = legendre_solve_seeded(&c, seed).unwrap().unwrap();
        assert!(c.contains(&p));
        seen.insert(p.coords.clone());
    }
    // Different seeds are allowed to coincide, but the randomized
    // reduction path should produce some variety on this conic.
    assert!(seen.len() >= 2, "expected path diversity across seeds");
}

#[test]
fn tangent_form_examples() {
    // X² + Y² − Z² at (3,4,5): Euler form 6X + 8Y − 10Z = 2·(3X+4Y−5Z).
    let c = conic(1, 1, -1);
    let q = ProjPoint::new([3.into(), 4.into(), 5.into()]);
    let t = tangent_form(&c, &q).unwrap();
    assert_eq!(t.coeffs(), &[BigInt::from(3), BigInt::from(4), BigInt::from(-5)]);
    assert_eq!(t.content(), &BigInt::from(2));
    assert!(t.eval_int(&q.coords).is_zero());

    // −Γ₂² + Γ₃² − T² at (0,1,1): 2Γ₃ − 2T up to scale.
    let c = conic(-1, 1, -1);
    let q = ProjPoint::new([0.into(), 1.into(), 1.into()]);
    let t = tangent_form(&c, &q).unwrap();
    assert_eq!(t.coeffs(), &[BigInt::zero(), BigInt::from(1), BigInt::from(-1)]);
    assert_eq!(t.content(), &BigInt::from(2));
}

#[test]
fn tangent_vanishes_only_at_base_point() {
    let c = conic(1, -2, -1);
    let q = legendre_solve(&c).unwrap().unwrap();
    let t = tangent_form(&c, &q).unwrap();
    assert!(t.eval_int(&q.coords).is_zero());
    // Other conic points: tangency to an irreducible conic means the
    // form is nonzero away from the base point.
    for x in -20i64..20 {
        for y in -20i64..20 {
            for z in 0i64..20 {
                let v = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                if (x, y, z) == (0, 0, 0) || !c.eval(&v).is_zero() {
                    continue;
                }
                let p = ProjPoint::new(v);
                if p == q {
                    continue;
                }
                assert!(
                    !t.eval_int(&p.coords).is_zero(),
                    "tangent vanished at second point {p}"
                );
            }
        }
    }
}

#[test]
fn tangent_scales_linearly_with_point_scaling() {
    // Scaling the base point multiplies the exact Euler form by the
    // same factor; the primitive form and the symbol inputs only move
    // by squares-and-content bookkeeping.
    let c = conic(1, 1, -1);
    let q = ProjPoint::new([3.into(), 4.into(), 5.into()]);
    let t = tangent_form(&c, &q).unwrap();
    let v = [int(1), int(1), int(1)];
    let scaled = [int(2), int(2), int(2)];
    assert_eq!(t.eval_exact(&scaled), t.eval_exact(&v) * int(2));
}

#[test]
fn normalization_strips_squares_and_common_factors() {
    let raw = conic(8, 18, -1);
    let (n, back) = raw.normalized().unwrap();
    // 8 = 2·2², 18 = 2·3² strip to (2, 2, −1); the coprime step then
    // moves the shared 2 onto the third coefficient.
    assert_eq!((&n.a, &n.b, &n.c), (&BigInt::from(1), &BigInt::from(1), &BigInt::from(-2)));
    // A point on the normalized conic pulls back to the raw conic.
    let p = legendre_solve(&n).unwrap().unwrap();
    let pulled: [BigRational; 3] = [
        BigRational::from(p.coords[0].clone()) * &back[0],
        BigRational::from(p.coords[1].clone()) * &back[1],
        BigRational::from(p.coords[2].clone()) * &back[2],
    ];
    assert!(raw.eval_rational(&pulled).is_zero());

    let raw = conic(4, 6, 10);
    let (n, _) = raw.normalized().unwrap();
    let [a, b, c] = n.coeffs();
    assert!(a.gcd(b).is_one() && a.gcd(c).is_one() && b.gcd(c).is_one());
}

#[test]
fn ambient_coefficients_push_through_vandermonde() {
    let cv = curve([-1, 0, 1]);
    let beta = triple(1, -1, -1);
    let h1 = conic_for(&cv, &beta, 0);
    let q = legendre_solve(&h1).unwrap().unwrap();
    let t = tangent_form(&h1, &q).unwrap();
    let g = t.gamma_coeffs().unwrap();
    let u = t.ambient_coeffs().unwrap();
    // Substituting Γ_m = U₁ + U₂e_m + U₃e_m² must agree: compare at a
    // few ambient points.
    for (u1, u2, u3, tt) in [(1i64, 2, 3, 4), (0, 1, -1, 2), (5, -3, 2, 1)] {
        let gamma_val = |m: usize| {
            let e = &cv.roots()[m];
            BigInt::from(u1) + BigInt::from(u2) * e + BigInt::from(u3) * e * e
        };
        let via_gamma: BigInt = (0..3).map(|m| &g[m] * gamma_val(m)).sum::<BigInt>()
            + &g[3] * BigInt::from(tt);
        let via_ambient = &u[0] * BigInt::from(u1)
            + &u[1] * BigInt::from(u2)
            + &u[2] * BigInt::from(u3)
            + &u[3] * BigInt::from(tt);
        assert_eq!(via_gamma, via_ambient);
    }
}

#[test]
fn selmer_conics_always_solve() {
    // Conics attached to descent images of rational points must have
    // global points (these classes are in the Selmer group).
    let cv = curve([-6, 0, 6]);
    let m = cv.in_field(&crate::curve::field::Rationals);
    for pt in crate::curve::point_search(&cv, 30) {
        let beta = crate::curve::descent_image(&cv, &pt);
        for i in 0..3 {
            let h = conic_for(&cv, &beta, i);
            let p = legendre_solve(&h).unwrap();
            assert!(p.is_some(), "unsolvable conic {h} for point image {beta}");
        }
    }
    let _ = m;
}
