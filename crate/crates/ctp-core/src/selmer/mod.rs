//! Complete 2-descent: enumerate candidate square-class triples
//! supported on the bad primes, decide local solvability of the
//! attached 2-covering at every relevant place, assemble a basis of
//! the 2-Selmer group, and produce certified local points on coverings.
//!
//! Local solvability at a finite prime is decided exactly: the x-line
//! is decomposed into p-adic balls on which the square class of every
//! (x − e_i)/β_i is provably constant (a Hensel-margin argument — units
//! congruent to 1 mod p, or mod 8 at p = 2, are squares), so the finite
//! tree walk is conclusive, never a sampling heuristic. At the real
//! place the decision is exact sign-region analysis.

mod local;
pub(crate) mod solvable;

pub use local::{local_point, local_point_capped, LocalCoveringPoint, LocalValue};
pub use solvable::is_locally_soluble_raw;

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::conic::{conic_for, DiagonalConic, ProjPoint, TangentForm};
use crate::curve::{descent_image, point_search, CurvePoint, SplitCurve, SquareClassTriple};
use crate::exec::{self, Exec};
use crate::numth::{Place, SquareClass};
use num_traits::Zero;
use crate::{Error, Result};

/// Working p-adic precision for curve data at p: a fixed margin plus
/// twice the valuation of 2·disc. Escalation doubles it, up to the cap.
pub fn working_precision(curve: &SplitCurve, p: u64) -> u32 {
    let mut v = 0u32;
    let mut d = BigInt::from(2) * curve.disc();
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
        v += 1;
    }
    20 + 2 * v
}

/// The 2-covering D_a ⊂ P³ attached to a square-class triple: cut out
/// by any two of the three conics H_i, with lazily computed global
/// conic data (a rational point and tangent form per conic).
#[derive(Debug)]
pub struct TwoCovering {
    curve: SplitCurve,
    beta: SquareClassTriple,
    conics: [DiagonalConic; 3],
    global_data: OnceLock<[(ProjPoint, TangentForm); 3]>,
}

impl TwoCovering {
    pub fn new(curve: &SplitCurve, beta: SquareClassTriple) -> TwoCovering {
        let conics = [
            conic_for(curve, &beta, 0),
            conic_for(curve, &beta, 1),
            conic_for(curve, &beta, 2),
        ];
        TwoCovering {
            curve: curve.clone(),
            beta,
            conics,
            global_data: OnceLock::new(),
        }
    }

    pub fn curve(&self) -> &SplitCurve {
        &self.curve
    }

    pub fn beta(&self) -> &SquareClassTriple {
        &self.beta
    }

    pub fn conics(&self) -> &[DiagonalConic; 3] {
        &self.conics
    }

    pub(crate) fn global_data_cell(&self) -> &OnceLock<[(ProjPoint, TangentForm); 3]> {
        &self.global_data
    }

    /// Cached global data, if it has been computed.
    pub fn global_data(&self) -> Option<&[(ProjPoint, TangentForm); 3]> {
        self.global_data.get()
    }
}

/// Whether the covering has a point over the completion at `v`.
pub fn is_locally_soluble(cov: &TwoCovering, v: &Place) -> Result<bool> {
    is_locally_soluble_raw(&cov.curve, &cov.beta, v)
}

/// Generators of the ambient F₂-space of candidate triples: components
/// supported on {−1} ∪ bad primes with square product, so (g, 1, g) and
/// (1, g, g) over g in the support set.
pub fn candidate_space(curve: &SplitCurve) -> Vec<SquareClassTriple> {
    let mut gens = Vec::new();
    for g in support_set(curve) {
        let c = SquareClass::from_squarefree(g);
        gens.push(
            SquareClassTriple::new(c.clone(), SquareClass::one(), c.clone()).unwrap(),
        );
        gens.push(SquareClassTriple::new(SquareClass::one(), c.clone(), c).unwrap());
    }
    gens
}

fn support_set(curve: &SplitCurve) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(-1)];
    s.extend(curve.bad_primes().iter().map(|&p| BigInt::from(p)));
    s
}

/// Every element of the candidate space, in a deterministic order
/// (gray-code-free plain subset enumeration over the two free slots).
pub fn all_candidates(curve: &SplitCurve) -> Vec<SquareClassTriple> {
    let s = support_set(curve);
    let n = s.len();
    let squarefree_products: Vec<SquareClass> = (0u64..(1 << n))
        .map(|mask| {
            let mut prod = BigInt::from(1);
            for (i, g) in s.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    prod *= g;
                }
            }
            SquareClass::from_squarefree(prod)
        })
        .collect();
    let mut out = Vec::with_capacity(squarefree_products.len().pow(2));
    for b1 in &squarefree_products {
        for b2 in &squarefree_products {
            let b3 = b1.mul(b2);
            out.push(SquareClassTriple::new(b1.clone(), b2.clone(), b3).unwrap());
        }
    }
    out
}

/// The 2-Selmer group as a subspace of the candidate space.
#[derive(Debug, Clone)]
pub struct SelmerGroup {
    curve: SplitCurve,
    basis: Vec<SquareClassTriple>,
    elements: Vec<SquareClassTriple>,
    torsion_image: Vec<SquareClassTriple>,
}

impl SelmerGroup {
    pub fn curve(&self) -> &SplitCurve {
        &self.curve
    }

    pub fn basis(&self) -> &[SquareClassTriple] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All 2^dim elements, sorted.
    pub fn elements(&self) -> &[SquareClassTriple] {
        &self.elements
    }

    /// Images of T₀, T₁, T₂, T₃ under the descent map.
    pub fn torsion_image(&self) -> &[SquareClassTriple] {
        &self.torsion_image
    }

    pub fn contains(&self, t: &SquareClassTriple) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    /// Coordinates of an element with respect to the basis, if it lies
    /// in the group.
    pub fn coordinates(&self, t: &SquareClassTriple) -> Option<Vec<bool>> {
        // dim ≤ ~16, so brute subset search is fine and has no linear
        // algebra to get wrong.
        let n = self.basis.len();
        for mask in 0u64..(1 << n) {
            let mut acc = SquareClassTriple::trivial();
            for (i, b) in self.basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.mul(b);
                }
            }
            if &acc == t {
                return Some((0..n).map(|i| mask >> i & 1 == 1).collect());
            }
        }
        None
    }

    /// The element with the given basis coordinates.
    pub fn element_from_coordinates(&self, coords: &[bool]) -> SquareClassTriple {
        let mut acc = SquareClassTriple::trivial();
        for (i, b) in self.basis.iter().enumerate() {
            if coords[i] {
                acc = acc.mul(b);
            }
        }
        acc
    }
}

/// Run the complete 2-descent: test every candidate triple for local
/// solvability at ∞, 2, and the odd bad primes, and assemble the
/// subgroup that survives.
pub fn compute_selmer(curve: &SplitCurve) -> Result<SelmerGroup> {
    compute_selmer_exec(curve, Exec::default())
}

pub fn compute_selmer_exec(curve: &SplitCurve, exec: Exec) -> Result<SelmerGroup> {
    let candidates = all_candidates(curve);
    let mut places = vec![Place::RealInfinite];
    places.extend(curve.bad_primes().iter().map(|&p| Place::FinitePrime(p)));

    let verdicts: Vec<Result<bool>> = exec::map_collect(exec, &candidates, |beta| {
        for v in &places {
            if !is_locally_soluble_raw(curve, beta, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    });

    let mut elements = Vec::new();
    for (beta, verdict) in candidates.into_iter().zip(verdicts) {
        if verdict? {
            elements.push(beta);
        }
    }
    elements.sort();
    elements.dedup();

    // The survivors must form a subgroup; extract a basis greedily.
    let mut basis: Vec<SquareClassTriple> = Vec::new();
    let mut span = vec![SquareClassTriple::trivial()];
    for el in &elements {
        if span.contains(el) {
            continue;
        }
        let mut grown = span.clone();
        for s in &span {
            grown.push(s.mul(el));
        }
        basis.push(el.clone());
        span = grown;
    }
    span.sort();
    if span != elements {
        return Err(Error::Inconsistency(
            "locally soluble candidates do not form a subgroup".into(),
        ));
    }

    let torsion_image: Vec<SquareClassTriple> = (0..4)
        .map(|i| {
            if i == 0 {
                SquareClassTriple::trivial()
            } else {
                curve.torsion_descent_image(i - 1)
            }
        })
        .collect();
    for t in &torsion_image {
        if elements.binary_search(t).is_err() {
            return Err(Error::Inconsistency(format!(
                "torsion image {t} is not locally soluble everywhere"
            )));
        }
    }

    Ok(SelmerGroup {
        curve: curve.clone(),
        basis,
        elements,
        torsion_image,
    })
}

/// Descent images of all points found by naive search up to the height
/// bound; every one of them must land in the Selmer group.
pub fn point_images(
    curve: &SplitCurve,
    height_bound: u64,
) -> Vec<(CurvePoint<crate::curve::field::Rationals>, SquareClassTriple)> {
    point_search(curve, height_bound)
        .into_iter()
        .map(|p| {
            let img = descent_image(curve, &p);
            (p, img)
        })
        .collect()
}

#[cfg(test)]
mod tests;
