use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every numeric routine in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("{op}: argument outside the domain ({reason})")]
    Domain { op: &'static str, reason: String },

    #[error("{op}: pole at {at}")]
    Pole { op: &'static str, at: String },

    #[error("{op}: singular point ({reason})")]
    Singularity { op: &'static str, reason: String },

    #[error("precision budget insufficient: {needed} bits required, retry with at least {suggested_bits}")]
    Precision { needed: u64, suggested_bits: u32 },

    #[error("quadrature did not converge after {levels} refinements (estimate {estimate}, last change {last_change:e})")]
    Quadrature {
        levels: u32,
        estimate: String,
        last_change: f64,
    },

    #[error("invalid Riley root: group relation residual {residual:e} exceeds {bound:e}")]
    InvalidRoot { residual: f64, bound: f64 },

    #[error("{what}: {detail}")]
    Inconsistency { what: &'static str, detail: String },

    #[error("{op}: result is not finite")]
    NonFinite { op: &'static str },
}

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidContext(_) => "invalid_context",
            Error::Domain { .. } => "domain",
            Error::Pole { .. } => "pole",
            Error::Singularity { .. } => "singularity",
            Error::Precision { .. } => "precision",
            Error::Quadrature { .. } => "quadrature",
            Error::InvalidRoot { .. } => "invalid_root",
            Error::Inconsistency { .. } => "inconsistency",
            Error::NonFinite { .. } => "non_finite",
        }
    }

    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn pole(op: &'static str, at: impl Into<String>) -> Self {
        Error::Pole { op, at: at.into() }
    }
}
