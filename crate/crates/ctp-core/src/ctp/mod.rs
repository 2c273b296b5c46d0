//! The Cassels-Tate pairing on the 2-Selmer group, computed through
//! explicit conic data.
//!
//! For a Selmer element a = (β₁, β₂, β₃) the three conics H_i attached
//! to its 2-covering each carry a rational point 𝔮_i and the tangent
//! form L_i there. The pairing of a with a' is the product over places
//! of ∏_i (L_i(𝔮_v), β_i')_v, where 𝔮_v is any local point on the
//! covering avoiding the tangent lines. A second route recomputes each
//! local contribution from the quantities
//!   δ_{v,i} = 2(1 + (β_k w_k Γ*_k − β_j w_j Γ*_j)/(e_k − e_j)),
//! which satisfy (e_k − e_j)·δ_{v,i} = L_i(𝔮_v) identically; verify
//! mode checks this identity at every evaluated place, the agreement of
//! both routes, and the invariance of the matrix under re-solving
//! conics, resampling local points, and enlarging the place set.

mod engine;
mod f2;

pub use engine::{
    contributing_places, delta_crosscheck, global_data, good_probe_primes, local_factor,
    local_factor_detailed, pair, pair_detailed, pairing_matrix, DeltaCrosscheck, DeltaWitness,
    GlobalData, LocalFactorRecord, PairDetail, PairingOptions,
};

use crate::curve::SquareClassTriple;
use crate::exec::Exec;
use crate::{Error, Result};

/// An element of ½Z/Z: the bit is 0 for pairing value 0 (symbol +1)
/// and 1 for value ½ (symbol −1), matching v ↦ (−1)^{2v}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingValue {
    bit: bool,
}

impl PairingValue {
    pub fn zero() -> PairingValue {
        PairingValue { bit: false }
    }

    pub fn from_sign(sign: i8) -> PairingValue {
        debug_assert!(sign == 1 || sign == -1);
        PairingValue { bit: sign == -1 }
    }

    pub fn bit(&self) -> bool {
        self.bit
    }

    /// Multiplicative form (−1)^{2v}.
    pub fn sign(&self) -> i8 {
        if self.bit {
            -1
        } else {
            1
        }
    }

    pub fn add(&self, other: &PairingValue) -> PairingValue {
        PairingValue {
            bit: self.bit ^ other.bit,
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.bit
    }
}

impl std::fmt::Display for PairingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", if self.bit { "1/2" } else { "0" })
    }
}

/// The pairing matrix over F₂ on a Selmer basis, its kernel, and the
/// rank bounds derived from it.
#[derive(Debug, Clone)]
pub struct PairingMatrix {
    basis: Vec<SquareClassTriple>,
    rows: Vec<u64>,
    kernel_basis: Vec<Vec<bool>>,
    kernel_dim: usize,
    naive_rank_bound: u32,
    refined_rank_bound: u32,
    local_log: Vec<LocalFactorRecord>,
}

impl PairingMatrix {
    pub fn basis(&self) -> &[SquareClassTriple] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bit(&self, r: usize, c: usize) -> bool {
        self.rows[r] >> c & 1 == 1
    }

    /// Multiplicative entry (−1)^{2⟨a_r, a_s⟩}.
    pub fn sign(&self, r: usize, c: usize) -> i8 {
        if self.bit(r, c) {
            -1
        } else {
            1
        }
    }

    pub fn value(&self, r: usize, c: usize) -> PairingValue {
        PairingValue { bit: self.bit(r, c) }
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    /// Kernel vectors as basis-coordinate arrays.
    pub fn kernel_basis(&self) -> &[Vec<bool>] {
        &self.kernel_basis
    }

    /// dim − 2: the bound on the Mordell-Weil rank straight from the
    /// Selmer group.
    pub fn naive_rank_bound(&self) -> u32 {
        self.naive_rank_bound
    }

    /// kernel_dim − 2: the bound refined by the pairing (equivalent to
    /// a 4-descent bound).
    pub fn refined_rank_bound(&self) -> u32 {
        self.refined_rank_bound
    }

    pub fn f2_rank(&self) -> usize {
        f2::rank(&self.rows, self.dim())
    }

    /// Per-(entry, place) symbol log, in deterministic (row, col,
    /// place) order.
    pub fn local_log(&self) -> &[LocalFactorRecord] {
        &self.local_log
    }

    /// Structural invariants every correctly computed matrix satisfies:
    /// symmetric, zero diagonal, even F₂-rank.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.dim();
        for r in 0..n {
            if self.bit(r, r) {
                return Err(Error::Inconsistency(format!("nonzero diagonal at {r}")));
            }
            for c in 0..n {
                if self.bit(r, c) != self.bit(c, r) {
                    return Err(Error::Inconsistency(format!("asymmetry at ({r}, {c})")));
                }
            }
        }
        if !self.f2_rank().is_multiple_of(2) {
            return Err(Error::Inconsistency("odd F₂-rank".into()));
        }
        if self.kernel_dim < 2 {
            return Err(Error::Inconsistency(
                "kernel smaller than the torsion contribution".into(),
            ));
        }
        Ok(())
    }

    /// Whether an element (given in basis coordinates) pairs to zero
    /// with the whole basis.
    pub fn in_kernel(&self, coords: &[bool]) -> bool {
        let x = coords
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | ((*b as u64) << i));
        (0..self.dim()).all(|r| (self.rows[r] & x).count_ones().is_multiple_of(2))
    }
}

/// Options steering a pairing run.
#[derive(Debug, Clone)]
pub struct MatrixOptions {
    pub seed: u64,
    pub extra_places: Vec<u64>,
    /// Run the full well-definedness suite: symmetric recomputation,
    /// local-point resampling, delta cross-checks, re-solved conics,
    /// and an enlarged place set must all reproduce the matrix.
    pub verify: bool,
    pub exec: Exec,
    /// Ceiling for p-adic precision escalation (≤ the global cap).
    pub precision_cap: u32,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        MatrixOptions {
            seed: 0,
            extra_places: Vec::new(),
            verify: false,
            exec: Exec::default(),
            precision_cap: crate::numth::PRECISION_CAP,
        }
    }
}
