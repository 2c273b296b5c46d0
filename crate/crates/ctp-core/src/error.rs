use std::fmt;

use num_bigint::BigInt;

/// Errors surfaced by the descent and pairing machinery.
///
/// The overall contract is "never a wrong answer": whenever a
/// computation cannot be completed rigorously within its configured
/// effort (factorization effort, p-adic precision, search depth), an
/// explicit error is returned instead of a guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input was zero where a nonzero value is required.
    ZeroInput,
    /// A composite survivor remained after the configured factorization
    /// effort (trial division + Pollard rho) was exhausted.
    FactorizationIncomplete { n: BigInt },
    /// A prime larger than the supported word size appeared in curve or
    /// class data.
    PrimeTooLarge { p: BigInt },
    /// Curve construction was given a repeated root.
    RepeatedRoots,
    /// Curve construction was given coefficients with zero discriminant.
    SingularCurve,
    /// The 2-torsion of the requested curve is not fully rational, so
    /// the split model does not apply.
    IrrationalTwoTorsion,
    /// A p-adic computation needed more precision than the configured cap.
    PrecisionExceeded { prime: u64, needed: u32 },
    /// A local value was indistinguishable from zero at the precision
    /// cap; escalation did not resolve it.
    PseudoZero { context: String },
    /// The Legendre-equation descent exceeded its depth cap.
    DescentDepthExceeded,
    /// A certified search (local points, avoid-form resampling) ran out
    /// of room.
    SearchExhausted { context: String },
    /// An internal identity that must hold for correct inputs failed;
    /// this always indicates a bug, not bad input.
    Inconsistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInput => write!(f, "zero input rejected"),
            Error::FactorizationIncomplete { n } => {
                write!(f, "factorization incomplete: composite survivor {n}")
            }
            Error::PrimeTooLarge { p } => write!(f, "prime too large for local machinery: {p}"),
            Error::RepeatedRoots => write!(f, "repeated roots rejected"),
            Error::SingularCurve => write!(f, "singular curve"),
            Error::IrrationalTwoTorsion => write!(f, "2-torsion not fully rational"),
            Error::PrecisionExceeded { prime, needed } => {
                write!(f, "precision overflow at p = {prime}: needed {needed} digits")
            }
            Error::PseudoZero { context } => {
                write!(f, "value indistinguishable from zero at precision cap: {context}")
            }
            Error::DescentDepthExceeded => write!(f, "conic descent exceeded its depth cap"),
            Error::SearchExhausted { context } => write!(f, "search exhausted: {context}"),
            Error::Inconsistency(msg) => write!(f, "internal consistency error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
