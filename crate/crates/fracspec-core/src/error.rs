//! Shared error type for the core crate.

use alloc::string::String;
use core::fmt;

/// Errors raised by validation, domain checks and the constructions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input failed a structural precondition (bad ordering, empty
    /// list where one is required, non-finite number, ...).
    InvalidArgument(String),
    /// A site or evaluation point lies outside the operator's domain.
    Domain(String),
    /// `1/eps` is below `omega(1)`: the length scale is not defined for
    /// a resolution this coarse.
    BelowRange { omega_lo: f64, target: f64 },
    /// An m-function was requested at depth smaller than the barrier
    /// support; `tail_bound` is the computed bound on the neglected tail.
    Truncation { depth: i64, support: i64, tail_bound: f64 },
    /// A barrier value left the representable range of `f64` at the
    /// named construction stage.
    StageOverflow { stage: usize, log_value: f64 },
    /// The certified minimum `C_n` underflowed to zero at stage `k`.
    UnderflowAtStage { k: u32 },
    /// The padding search exhausted `k_max` without the certificate
    /// passing at the named stage.
    CertificateExhausted { stage: usize, k_max: i64 },
    /// A ledger does not describe the potential it was replayed against.
    LedgerMismatch(String),
    /// Internal invariant violation (reported rather than panicking).
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::BelowRange { omega_lo, target } => write!(
                f,
                "length scale undefined: target 1/eps = {target} is below omega(1) = {omega_lo}"
            ),
            Error::Truncation { depth, support, tail_bound } => write!(
                f,
                "depth {depth} does not cover barrier support {support}; tail bound {tail_bound:e}"
            ),
            Error::StageOverflow { stage, log_value } => write!(
                f,
                "stage {stage} barrier with log-value {log_value} exceeds double-precision range; \
                 extended precision required"
            ),
            Error::UnderflowAtStage { k } => {
                write!(f, "certified minimum underflowed to zero at stage k = {k}")
            }
            Error::CertificateExhausted { stage, k_max } => write!(
                f,
                "certificate did not pass within padding K <= {k_max} at stage {stage}"
            ),
            Error::LedgerMismatch(msg) => write!(f, "ledger mismatch: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
