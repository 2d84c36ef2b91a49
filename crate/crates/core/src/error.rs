use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value is missing, malformed or out of range.
    #[error("invalid configuration: `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    /// The input is constant, so a normalized quantity (ACF, PSD) is undefined.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// Nonzero amplitude or mass would leave the lattice.
    #[error("boundary violation: support [{lo}, {hi}] shifted by {jump} leaves a lattice of {extent} sites")]
    Boundary {
        lo: usize,
        hi: usize,
        jump: usize,
        extent: usize,
    },

    #[error("degenerate fit: {0}")]
    Fit(String),

    /// `KLD(R|W)` is infinite because `R > 0` somewhere `W = 0`.
    #[error("infinite divergence at site {0}")]
    InfiniteDivergence(usize),

    #[error("numerical tolerance exceeded: {0}")]
    Numerical(String),

    #[error("dimension mismatch: {0} vs {1}")]
    Shape(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
