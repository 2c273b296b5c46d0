use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::oracles::hilbert_solvable_search;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

#[test]
fn factorize_examples() {
    let f = factorize(&BigInt::one()).unwrap();
    assert_eq!(f.sign, 1);
    assert!(f.factors.is_empty());

    let f = factorize(&BigInt::from(-12)).unwrap();
    assert_eq!(f.sign, -1);
    assert_eq!(f.factors, vec![(2u32.into(), 2), (3u32.into(), 1)]);

    // 1156 = 2² · 17², checked against plain trial division.
    let f = factorize(&BigInt::from(1156)).unwrap();
    assert_eq!(f.factors, vec![(2u32.into(), 2), (17u32.into(), 2)]);
    assert_eq!(f.value(), BigInt::from(1156));

    assert_eq!(factorize(&BigInt::from(0)), Err(crate::Error::ZeroInput));
}

#[test]
fn factorize_large_and_incomplete() {
    // 1000003 · 1000033 — both beyond the trial bound, split by rho.
    let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
    let f = factorize(&n).unwrap();
    assert_eq!(f.value(), n);
    assert_eq!(f.factors.len(), 2);

    // With zero rho effort the same survivor is reported, not guessed.
    let err = factorize_with_effort(&n, 0).unwrap_err();
    assert!(matches!(err, crate::Error::FactorizationIncomplete { .. }));
}

#[test]
fn squarefree_part_examples() {
    assert_eq!(squarefree_part(&int(18)).unwrap().rep(), &BigInt::from(2));
    assert_eq!(squarefree_part(&rat(49, 4)).unwrap().rep(), &BigInt::from(1));
    assert_eq!(squarefree_part(&int(-75)).unwrap().rep(), &BigInt::from(-3));
    assert!(squarefree_part(&int(0)).is_err());
}

#[test]
fn square_class_mul_is_squarefree_product() {
    let a = squarefree_part(&int(6)).unwrap();
    let b = squarefree_part(&int(10)).unwrap();
    // 6 · 10 = 60 = 4 · 15.
    assert_eq!(a.mul(&b).rep(), &BigInt::from(15));
}

#[test]
fn is_square_local_examples() {
    // 17 ≡ 1 mod 8; squares of odd numbers are exactly 1 mod 8.
    assert!(is_square_local(&int(17), &Place::FinitePrime(2)));
    assert!(!is_square_local(&int(5), &Place::FinitePrime(2)));
    assert!(!is_square_local(&int(-4), &Place::RealInfinite));
    assert!(is_square_local(&rat(9, 16), &Place::FinitePrime(5)));
    assert!(!is_square_local(&rat(5, 1), &Place::FinitePrime(5)));
}

#[test]
fn padic_sqrt_examples() {
    let r = padic_sqrt(&int(25), 5, 4).unwrap().unwrap();
    assert_eq!(r.valuation(), 1);
    assert_eq!(r.unit() % 5u64, 1u32.into());

    let r = padic_sqrt(&int(2), 7, 1).unwrap().unwrap();
    let u = u64::try_from(r.unit().clone()).unwrap();
    assert!(u == 3 || u == 4, "3² = 9 ≡ 2 mod 7");

    assert!(padic_sqrt(&int(5), 2, 3).unwrap().is_none());
}

#[test]
fn padic_sqrt_squares_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 200 {
        let p = *[2u64, 3, 5, 7, 11, 13, 97].get(rng.gen_range(0..7)).unwrap();
        let n = rng.gen_range(-3000i64..3000);
        let d = rng.gen_range(1i64..300);
        if n == 0 {
            continue;
        }
        let q = rat(n, d);
        let prec = rng.gen_range(4u32..24);
        match padic_sqrt(&q, p, prec).unwrap() {
            None => assert!(!is_square_local(&q, &Place::FinitePrime(p))),
            Some(r) => {
                let square = r.mul(&r);
                let exact = PAdicNumber::from_rational(&q, p, prec).unwrap();
                assert!(square.eq_to_precision(&exact), "sqrt({q})² ≠ {q} at p={p}");
                checked += 1;
            }
        }
    }
}

#[test]
fn padic_add_tracks_cancellation() {
    let a = PAdicNumber::from_rational(&int(10), 5, 4).unwrap();
    let b = PAdicNumber::from_rational(&int(-10), 5, 6).unwrap();
    // Full cancellation is a pseudo-zero, not a silent zero.
    assert!(matches!(a.add(&b), Err(crate::Error::PseudoZero { .. })));

    let c = PAdicNumber::from_rational(&int(15), 5, 4).unwrap();
    let sum = a.add(&c).unwrap();
    // 10 + 15 = 25: valuation jumps to 2 and two digits are spent.
    assert_eq!(sum.valuation(), 2);
    assert_eq!(sum.unit() % 5u64, 1u32.into());
}

#[test]
fn padic_square_class() {
    let x = PAdicNumber::from_rational(&rat(50, 3), 5, 6).unwrap();
    // 50/3 = 5² · 2/3; 2/3 ≡ 2·2 = 4 mod 5, a residue.
    assert_eq!(x.valuation(), 2);
    assert!(x.is_square().unwrap());
    let y = PAdicNumber::from_rational(&int(10), 5, 6).unwrap();
    assert_eq!(y.square_class_rep().unwrap(), BigInt::from(10));
}

#[test]
fn hilbert_symbol_examples() {
    // (1, b)_v = +1 always: z = x, y = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let b = int(rng.gen_range(1i64..500) * if rng.gen() { 1 } else { -1 });
        for v in [Place::RealInfinite, Place::FinitePrime(2), Place::FinitePrime(11)] {
            assert_eq!(hilbert_symbol(&int(1), &b, &v), 1);
        }
    }
    assert_eq!(hilbert_symbol(&int(-1), &int(-1), &Place::RealInfinite), -1);
    assert_eq!(hilbert_symbol(&int(-1), &int(-1), &Place::FinitePrime(2)), -1);
    assert_eq!(hilbert_symbol(&int(2), &int(7), &Place::FinitePrime(7)), 1);
    assert_eq!(hilbert_symbol(&int(5), &int(5), &Place::FinitePrime(5)), 1);
}

#[test]
fn hilbert_symbol_matches_search_oracle_smoke() {
    // Small slice here; the full |a|,|b| ≤ 30 grid runs in the
    // acceptance suite.
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            if a == 0 || b == 0 {
                continue;
            }
            for p in [None, Some(2u64), Some(3), Some(5), Some(7)] {
                let place = match p {
                    None => Place::RealInfinite,
                    Some(p) => Place::FinitePrime(p),
                };
                let sym = hilbert_symbol(&int(a), &int(b), &place);
                let oracle = hilbert_solvable_search(a, b, p);
                assert_eq!(sym == 1, oracle, "(a,b,v) = ({a},{b},{place})");
            }
        }
    }
}

/// Places that can carry a nontrivial symbol for the pair (a, b).
fn relevant_places(a: i64, b: i64) -> Vec<Place> {
    let mut places = vec![Place::RealInfinite, Place::FinitePrime(2)];
    let support = |mut n: i64| {
        let mut ps = Vec::new();
        let mut d = 2;
        while d * d <= n.abs() {
            if n % d == 0 {
                ps.push(d as u64);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n.abs() > 1 {
            ps.push(n.unsigned_abs());
        }
        ps
    };
    for p in support(a).into_iter().chain(support(b)) {
        if p != 2 && !places.contains(&Place::FinitePrime(p)) {
            places.push(Place::FinitePrime(p));
        }
    }
    places
}

#[test]
fn hilbert_product_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let a = loop {
            let a = rng.gen_range(-10_000i64..=10_000);
            if a != 0 {
                break a;
            }
        };
        let b = loop {
            let b = rng.gen_range(-10_000i64..=10_000);
            if b != 0 {
                break b;
            }
        };
        let mut prod = 1i8;
        for v in relevant_places(a, b) {
            prod *= hilbert_symbol(&int(a), &int(b), &v);
        }
        assert_eq!(prod, 1, "product formula failed for ({a}, {b})");
    }
}

#[test]
fn hilbert_bimultiplicative_and_square_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let nz = |rng: &mut ChaCha8Rng| loop {
            let x = rng.gen_range(-500i64..=500);
            if x != 0 {
                break x;
            }
        };
        let (a, a2, b) = (nz(&mut rng), nz(&mut rng), nz(&mut rng));
        let c = nz(&mut rng);
        let v = match rng.gen_range(0..4) {
            0 => Place::RealInfinite,
            1 => Place::FinitePrime(2),
            2 => Place::FinitePrime(3),
            _ => Place::FinitePrime(*[5u64, 7, 11, 13, 17].get(rng.gen_range(0..5)).unwrap()),
        };
        assert_eq!(
            hilbert_symbol(&int(a * a2), &int(b), &v),
            hilbert_symbol(&int(a), &int(b), &v) * hilbert_symbol(&int(a2), &int(b), &v)
        );
        assert_eq!(
            hilbert_symbol(&int(a * c * c), &int(b), &v),
            hilbert_symbol(&int(a), &int(b), &v)
        );
    }
}

#[test]
fn hilbert_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let a = rng.gen_range(1i64..300) * if rng.gen() { 1 } else { -1 };
        let b = rng.gen_range(1i64..300) * if rng.gen() { 1 } else { -1 };
        for v in [Place::RealInfinite, Place::FinitePrime(2), Place::FinitePrime(3)] {
            assert_eq!(hilbert_symbol(&int(a), &int(b), &v), hilbert_symbol(&int(b), &int(a), &v));
        }
    }
}

#[test]
fn tonelli_shanks_roundtrip() {
    for p in [3u64, 5, 7, 11, 13, 101, 65537, 1_000_003] {
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..30 {
            let a = rng.gen_range(1..p);
            match sqrt_mod_p(a, p) {
                Some(r) => assert_eq!((r as u128 * r as u128) % p as u128, a as u128),
                None => assert_eq!(legendre_symbol(&BigInt::from(a), p), -1),
            }
        }
    }
}

#[test]
fn interval_sqrt_encloses() {
    let q = rat(3, 2);
    let enc = RatInterval::sqrt_of(&q, 40);
    assert!(enc.lo() * enc.lo() <= q && q <= enc.hi() * enc.hi());
    assert!(enc.width() < rat(1, 1_000_000_000));
    let sign = enc.sign().unwrap();
    assert_eq!(sign, 1);
}

#[test]
fn interval_arithmetic() {
    let a = RatInterval::new(rat(1, 2), rat(2, 3));
    let b = RatInterval::new(rat(-1, 3), rat(1, 5));
    let s = a.add(&b);
    assert_eq!(s.lo(), &rat(1, 6));
    assert_eq!(s.hi(), &rat(13, 15));
    assert_eq!(a.sign(), Some(1));
    assert_eq!(b.sign(), None);
    assert_eq!(a.mul_rational(&rat(-2, 1)).sign(), Some(-1));
}

#[test]
fn place_ordering_is_canonical() {
    let mut places = vec![Place::FinitePrime(7), Place::RealInfinite, Place::FinitePrime(2)];
    places.sort();
    assert_eq!(
        places,
        vec![Place::RealInfinite, Place::FinitePrime(2), Place::FinitePrime(7)]
    );
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn squarefree_part_is_squarefree_and_cofactor_square(
            n in -100_000i64..100_000i64, d in 1i64..1000
        ) {
            prop_assume!(n != 0);
            let q = rat(n, d);
            let s = squarefree_part(&q).unwrap();
            // q / s must be a square of a rational: numerator and
            // denominator of the reduced quotient are perfect squares.
            let quot = &q / BigRational::from(s.rep().clone());
            let num = quot.numer().magnitude().sqrt();
            let den = quot.denom().magnitude().sqrt();
            prop_assert_eq!(&(&num * &num), quot.numer().magnitude());
            prop_assert_eq!(&(&den * &den), quot.denom().magnitude());
        }

        #[test]
        fn hilbert_first_argument_one(b in 1i64..10_000) {
            for v in [Place::RealInfinite, Place::FinitePrime(2), Place::FinitePrime(5)] {
                prop_assert_eq!(hilbert_symbol(&int(1), &int(b), &v), 1);
            }
        }
    }
}
