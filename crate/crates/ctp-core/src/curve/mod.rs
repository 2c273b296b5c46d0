//! Split-2-torsion elliptic curve model y² = (x−e₁)(x−e₂)(x−e₃) with
//! integral roots summing to zero, chord-tangent point arithmetic,
//! closed-form torsion translation, the descent map to square-class
//! triples, and naive rational point search.

pub mod field;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exec::{self, Exec};
use crate::numth::{factorize, prime_support_u64, squarefree_part, SquareClass};
use crate::{Error, Result};
use field::{Field, Rationals};

/// Change of coordinates applied by [`SplitCurve::from_roots`]:
/// a point (x, y) on the input model corresponds to
/// (u²(x − shift), u³y) on the normalized model.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    pub u: BigRational,
    pub shift: BigRational,
}

impl Scaling {
    /// Map a normalized x-coordinate back to the input model.
    pub fn x_to_input(&self, x: &BigRational) -> BigRational {
        x / (&self.u * &self.u) + &self.shift
    }
}

/// Elliptic curve y² = x³ + Ax + B = (x−e₁)(x−e₂)(x−e₃) with distinct
/// integral roots summing to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCurve {
    e: [BigInt; 3],
    a: BigInt,
    b: BigInt,
    disc: BigInt,
    bad_primes: Vec<u64>,
    scaling: Scaling,
}

impl SplitCurve {
    /// Build the curve from three distinct rational roots, applying the
    /// admissible change x → u²x + r, y → u³y that clears denominators
    /// and the x² term.
    pub fn from_roots(r1: &BigRational, r2: &BigRational, r3: &BigRational) -> Result<SplitCurve> {
        if r1 == r2 || r1 == r3 || r2 == r3 {
            return Err(Error::RepeatedRoots);
        }
        let three = BigRational::from(BigInt::from(3));
        let shift = (r1 + r2 + r3) / three;
        let shifted = [r1 - &shift, r2 - &shift, r3 - &shift];

        // Smallest positive integer u with u²·s_i integral for all i.
        let mut u = BigInt::one();
        let denom_lcm = shifted
            .iter()
            .fold(BigInt::one(), |acc, s| acc.lcm(s.denom()));
        for (p, _) in factorize(&denom_lcm)?.factors {
            let p = BigInt::from(p);
            let mut need = 0u32;
            for s in &shifted {
                let mut d = s.denom().clone();
                let mut v = 0u32;
                while (&d % &p).is_zero() {
                    d /= &p;
                    v += 1;
                }
                need = need.max(v);
            }
            u *= p.pow(need.div_ceil(2));
        }
        let u = BigRational::from(u);
        let u2 = &u * &u;
        let e: Vec<BigInt> = shifted
            .iter()
            .map(|s| {
                let t = s * &u2;
                debug_assert!(t.is_integer());
                t.to_integer()
            })
            .collect();
        let e: [BigInt; 3] = [e[0].clone(), e[1].clone(), e[2].clone()];

        let a = &e[0] * &e[1] + &e[0] * &e[2] + &e[1] * &e[2];
        let b = -(&e[0] * &e[1] * &e[2]);
        let d12 = &e[0] - &e[1];
        let d13 = &e[0] - &e[2];
        let d23 = &e[1] - &e[2];
        let prod = &d12 * &d13 * &d23;
        let disc = &prod * &prod;
        let bad_primes = prime_support_u64(&(BigInt::from(2) * &disc))?;

        Ok(SplitCurve {
            e,
            a,
            b,
            disc,
            bad_primes,
            scaling: Scaling { u, shift },
        })
    }

    /// Build from coefficients of y² = x³ + Ax + B. Succeeds exactly
    /// when all three roots are rational.
    pub fn from_coefficients(a: &BigRational, b: &BigRational) -> Result<SplitCurve> {
        let four = BigRational::from(BigInt::from(4));
        let twenty_seven = BigRational::from(BigInt::from(27));
        let disc = -(&four * a * a * a) - &twenty_seven * b * b;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        // Clear denominators: x = X/w turns the cubic into the monic
        // integral X³ + Aw²X + Bw³.
        let w = BigRational::from(a.denom().lcm(b.denom()));
        let aw = (a * &w * &w).to_integer();
        let bw = (b * &w * &w * &w).to_integer();

        let root = integer_cubic_root(&aw, &bw)?;
        // Deflate: X³ + aw·X + bw = (X − ρ)(X² + ρX + (ρ² + aw)), so the
        // remaining roots are (−ρ ± √(−3ρ² − 4aw)) / 2.
        let d = -BigInt::from(3) * &root * &root - BigInt::from(4) * &aw;
        let r = integer_sqrt_exact(&d).ok_or(Error::IrrationalTwoTorsion)?;
        let two_w = BigInt::from(2) * w.to_integer();
        let mut roots = [
            BigRational::new(root.clone(), w.to_integer()),
            BigRational::new(-&root + &r, two_w.clone()),
            BigRational::new(-&root - &r, two_w),
        ];
        roots.sort();
        SplitCurve::from_roots(&roots[0], &roots[1], &roots[2])
    }

    pub fn roots(&self) -> &[BigInt; 3] {
        &self.e
    }

    pub fn root(&self, i: usize) -> &BigInt {
        &self.e[i]
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Primes dividing 2·disc, ascending.
    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    pub fn scaling(&self) -> &Scaling {
        &self.scaling
    }

    /// The curve's coefficients mapped into a coordinate field.
    pub fn in_field<F: Field>(&self, f: &F) -> CurveModel<F> {
        CurveModel {
            field: f.clone(),
            e: [
                f.from_int(&self.e[0]),
                f.from_int(&self.e[1]),
                f.from_int(&self.e[2]),
            ],
            a: f.from_int(&self.a),
            b: f.from_int(&self.b),
        }
    }

    /// Differences s_ij = e_i − e_j (0-indexed arguments).
    pub fn root_diff(&self, i: usize, j: usize) -> BigInt {
        &self.e[i] - &self.e[j]
    }

    /// The cyclic complement (j, k) of index i, matching the order in
    /// which the three conic forms are written down.
    pub fn cyclic_complement(i: usize) -> (usize, usize) {
        match i {
            0 => (1, 2),
            1 => (2, 0),
            2 => (0, 1),
            _ => panic!("index out of range"),
        }
    }

    /// Image of the 2-torsion point T_i under the descent map.
    pub fn torsion_descent_image(&self, i: usize) -> SquareClassTriple {
        let (j, k) = SplitCurve::cyclic_complement(i);
        let mut entries = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
        entries[j] = BigRational::from(self.root_diff(i, j));
        entries[k] = BigRational::from(self.root_diff(i, k));
        entries[i] = &entries[j] * &entries[k];
        SquareClassTriple::new(
            squarefree_part(&entries[0]).unwrap(),
            squarefree_part(&entries[1]).unwrap(),
            squarefree_part(&entries[2]).unwrap(),
        )
        .expect("torsion image satisfies the norm condition")
    }
}

fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// One rational (integer, after scaling) root of the monic integral
/// cubic X³ + aX + b, or an error if none exists.
fn integer_cubic_root(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if b.is_zero() {
        return Ok(BigInt::zero());
    }
    let eval = |x: &BigInt| x * x * x + a * x + b;
    // Integer roots divide the constant term.
    let f = factorize(b)?;
    let mut divisors = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut pe = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pe);
                pe *= BigInt::from(p.clone());
            }
        }
        divisors = next;
    }
    for d in &divisors {
        if eval(d).is_zero() {
            return Ok(d.clone());
        }
        let neg = -d;
        if eval(&neg).is_zero() {
            return Ok(neg);
        }
    }
    Err(Error::IrrationalTwoTorsion)
}

/// The curve over a specific coordinate field.
#[derive(Debug, Clone)]
pub struct CurveModel<F: Field> {
    pub field: F,
    pub e: [F::Elem; 3],
    pub a: F::Elem,
    pub b: F::Elem,
}

/// A point on the curve in one coordinate context; mixing contexts is
/// impossible by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvePoint<F: Field> {
    Infinity,
    Affine { x: F::Elem, y: F::Elem },
}

impl<F: Field> CurvePoint<F> {
    pub fn affine(x: F::Elem, y: F::Elem) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&F::Elem> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&F::Elem> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }
}

impl<F: Field> CurveModel<F> {
    /// f(x) = (x−e₁)(x−e₂)(x−e₃).
    pub fn eval_f(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.one();
        for e in &self.e {
            acc = f.mul(&acc, &f.sub(x, e));
        }
        acc
    }

    pub fn contains(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                let f = &self.field;
                f.is_zero(&f.sub(&f.mul(y, y), &self.eval_f(x)))
            }
        }
    }

    /// The 2-torsion point T_i = (e_i, 0); i = 0..3 with T_0 = ∞ is the
    /// caller's convention — here i indexes the roots 0, 1, 2.
    pub fn torsion_point(&self, i: usize) -> CurvePoint<F> {
        CurvePoint::Affine {
            x: self.e[i].clone(),
            y: self.field.zero(),
        }
    }

    pub fn negate(&self, p: &CurvePoint<F>) -> CurvePoint<F> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: self.field.neg(y),
            },
        }
    }

    /// Chord-tangent group law. Infinity is the identity.
    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> CurvePoint<F> {
        let f = &self.field;
        let (x1, y1) = match p {
            CurvePoint::Infinity => return q.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match q {
            CurvePoint::Infinity => return p.clone(),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let lambda = if x1 == x2 {
            if f.is_zero(&f.add(y1, y2)) {
                return CurvePoint::Infinity;
            }
            // Tangent: (3x² + A) / 2y.
            let three = f.from_int(&BigInt::from(3));
            let two = f.from_int(&BigInt::from(2));
            let num = f.add(&f.mul(&three, &f.mul(x1, x1)), &self.a);
            f.div(&num, &f.mul(&two, y1))
        } else {
            f.div(&f.sub(y2, y1), &f.sub(x2, x1))
        };
        let x3 = f.sub(&f.sub(&f.mul(&lambda, &lambda), x1), x2);
        let y3 = f.sub(&f.mul(&lambda, &f.sub(x1, &x3)), y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// P + T_i by the closed translation formula
    /// P + T_i = ((e_i·x + e_j·e_k − e_i(e_j+e_k))/(x−e_i),
    ///            −(e_j−e_i)(e_k−e_i)·y/(x−e_i)²),
    /// which is singular at x = e_i; that case routes through the
    /// generic group law.
    pub fn translate_by_torsion(&self, p: &CurvePoint<F>, i: usize) -> CurvePoint<F> {
        let f = &self.field;
        let (j, k) = SplitCurve::cyclic_complement(i);
        let (x, y) = match p {
            CurvePoint::Infinity => return self.torsion_point(i),
            CurvePoint::Affine { x, y } => (x, y),
        };
        let (ei, ej, ek) = (&self.e[i], &self.e[j], &self.e[k]);
        let dx = f.sub(x, ei);
        if f.is_zero(&dx) {
            return self.add(p, &self.torsion_point(i));
        }
        let num = f.sub(
            &f.add(&f.mul(ei, x), &f.mul(ej, ek)),
            &f.mul(ei, &f.add(ej, ek)),
        );
        let nx = f.div(&num, &dx);
        let c = f.mul(&f.sub(ej, ei), &f.sub(ek, ei));
        let ny = f.neg(&f.div(&f.mul(&c, y), &f.mul(&dx, &dx)));
        CurvePoint::Affine { x: nx, y: ny }
    }
}

/// An element of the ambient square-class space: a triple of square
/// classes whose product is a square (the norm condition).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClassTriple {
    b: [SquareClass; 3],
}

impl SquareClassTriple {
    pub fn new(b1: SquareClass, b2: SquareClass, b3: SquareClass) -> Result<SquareClassTriple> {
        if !b1.mul(&b2).mul(&b3).is_one() {
            return Err(Error::Inconsistency(format!(
                "triple ({b1}, {b2}, {b3}) violates the norm condition"
            )));
        }
        Ok(SquareClassTriple { b: [b1, b2, b3] })
    }

    pub fn trivial() -> SquareClassTriple {
        SquareClassTriple {
            b: [SquareClass::one(), SquareClass::one(), SquareClass::one()],
        }
    }

    pub fn get(&self, i: usize) -> &SquareClass {
        &self.b[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.b.iter().all(|c| c.is_one())
    }

    /// Componentwise product modulo squares.
    pub fn mul(&self, other: &SquareClassTriple) -> SquareClassTriple {
        SquareClassTriple {
            b: [
                self.b[0].mul(&other.b[0]),
                self.b[1].mul(&other.b[1]),
                self.b[2].mul(&other.b[2]),
            ],
        }
    }

    /// Representatives as integers.
    pub fn reps(&self) -> [&BigInt; 3] {
        [self.b[0].rep(), self.b[1].rep(), self.b[2].rep()]
    }
}

impl std::fmt::Display for SquareClassTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.b[0], self.b[1], self.b[2])
    }
}

/// Image of a rational point under the complete-2-descent map
/// P ↦ (x−e₁, x−e₂, x−e₃) modulo squares, with the standard convention
/// at 2-torsion points and the trivial triple at infinity.
pub fn descent_image(curve: &SplitCurve, p: &CurvePoint<Rationals>) -> SquareClassTriple {
    let (x, _y) = match p {
        CurvePoint::Infinity => return SquareClassTriple::trivial(),
        CurvePoint::Affine { x, y } => (x, y),
    };
    for i in 0..3 {
        if x == &BigRational::from(curve.e[i].clone()) {
            return curve.torsion_descent_image(i);
        }
    }
    let classes: Vec<SquareClass> = curve
        .e
        .iter()
        .map(|e| squarefree_part(&(x - BigRational::from(e.clone()))).unwrap())
        .collect();
    SquareClassTriple::new(classes[0].clone(), classes[1].clone(), classes[2].clone())
        .expect("descent image satisfies the norm condition")
}

/// All rational points with x = m/d², |m| ≤ H, d² ≤ H (plus the point
/// at infinity and all 2-torsion), found by exact exhaustive scan.
pub fn point_search(curve: &SplitCurve, height_bound: u64) -> Vec<CurvePoint<Rationals>> {
    point_search_exec(curve, height_bound, Exec::default())
}

pub fn point_search_exec(
    curve: &SplitCurve,
    height_bound: u64,
    exec: Exec,
) -> Vec<CurvePoint<Rationals>> {
    let h = height_bound.max(1) as i64;
    let dmax = (h as f64).sqrt() as i64;
    let ds: Vec<i64> = (1..=dmax.max(1)).collect();
    let chunks = exec::map_collect(exec, &ds, |&d| {
        let mut found: Vec<(BigRational, BigRational)> = Vec::new();
        let d2 = BigInt::from(d * d);
        for m in -h..=h {
            if num_integer::gcd(m, d) != 1 {
                continue;
            }
            let mb = BigInt::from(m);
            let n: BigInt = curve
                .e
                .iter()
                .map(|e| &mb - e * &d2)
                .product();
            if n.is_negative() {
                continue;
            }
            if let Some(r) = integer_sqrt_exact(&n) {
                let x = BigRational::new(mb.clone(), d2.clone());
                let y = BigRational::new(r, BigInt::from(d * d * d));
                if y.is_zero() {
                    found.push((x, y));
                } else {
                    found.push((x.clone(), y.clone()));
                    found.push((x, -y));
                }
            }
        }
        found
    });

    let mut points: Vec<(BigRational, BigRational)> = chunks.into_iter().flatten().collect();
    // 2-torsion is always reported, whatever the bound.
    for e in curve.roots() {
        points.push((BigRational::from(e.clone()), BigRational::zero()));
    }
    points.sort();
    points.dedup();

    let mut out = vec![CurvePoint::Infinity];
    out.extend(
        points
            .into_iter()
            .map(|(x, y)| CurvePoint::Affine { x, y }),
    );
    out
}
