//! Complete 2-descent on elliptic curves over Q with full rational
//! 2-torsion, and the Cassels-Tate pairing on the resulting 2-Selmer
//! group.
//!
//! The pipeline, in the order the modules build on each other:
//!
//! * [`numth`] — exact integer/rational utilities: factorization,
//!   Hilbert symbols at all places of Q, p-adic square roots with
//!   tracked precision, rational interval arithmetic for rigorous sign
//!   decisions over R.
//! * [`curve`] — the split curve model `y² = (x−e₁)(x−e₂)(x−e₃)`,
//!   point arithmetic, torsion translation identities, the descent map
//!   to square-class triples, and naive point search.
//! * [`conic`] — rational points on diagonal ternary conics (Legendre
//!   equations) and tangent linear forms.
//! * [`selmer`] — enumeration of candidate square-class triples, local
//!   solvability of the associated 2-coverings at every relevant place,
//!   a basis of the 2-Selmer group, and local points on coverings.
//! * [`ctp`] — the pairing itself: global conic data, local factors as
//!   products of Hilbert symbols, the pairing matrix over F₂ and the
//!   refined Mordell-Weil rank bound, plus an independent cross-check
//!   route through the local quantities δ_{v,i}.
//!
//! All values are exact (integers, rationals, p-adics with explicit
//! precision, rational intervals); no floating point is used anywhere.

// Index loops over parallel coordinate arrays keep the i/j/k root
// bookkeeping visible; zipped iterators would hide it.
#![allow(clippy::needless_range_loop)]

pub mod conic;
pub mod ctp;
pub mod curve;
pub mod error;
pub mod exec;
pub mod numth;
pub mod oracles;
pub mod selmer;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
