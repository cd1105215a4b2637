use thiserror::Error;

/// Errors raised by the library. Every variant names the violated
/// precondition or invariant so callers can map them to exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{what}: {value} exceeds supported maximum {max}")]
    Range {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "truncated basis too small: tail mass {tail_mass:.3e} exceeds {limit:.3e}; \
         retry with n_max >= {suggested_n_max}"
    )]
    Truncation {
        tail_mass: f64,
        limit: f64,
        suggested_n_max: usize,
    },

    #[error("operands were built on different truncated bases")]
    BasisMismatch,

    #[error("degenerate witness: det m3 = {det_m:.6e}, det mu3 = {det_mu:.6e} (zero denominator)")]
    DegenerateWitness { det_m: f64, det_mu: f64 },

    #[error("witness undefined: {0}")]
    UndefinedWitness(String),

    #[error("unsupported state '{label}': {reason}")]
    UnsupportedState { label: String, reason: String },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
