use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("symbol support would grow to {needed} modes, above the cap {cap} ({stage})")]
    SupportCap {
        cap: usize,
        needed: usize,
        stage: String,
    },

    #[error("derivative of order {order} unavailable for {primitive}")]
    DerivativeUnavailable { primitive: String, order: u32 },

    #[error("symbol is not self-adjoint: max deviation {dev:.3e} exceeds {tol:.1e}")]
    NotSelfAdjoint { dev: f64, tol: f64 },

    #[error("matrix is not Hermitian: max deviation {dev:.3e} exceeds {tol:.1e}")]
    NotHermitian { dev: f64, tol: f64 },

    #[error("basis cutoff {k_basis} too small for symbol bandwidth {bandwidth}")]
    BasisTooSmall { k_basis: i64, bandwidth: i64 },

    #[error("lattice enumeration above the cap {cap} (bound {bound:.3})")]
    EnumerationCap { cap: usize, bound: f64 },

    #[error("site k={site:?} is resonant: hbar*k lies in a zone of order {order} (lattice basis {basis:?})")]
    ResonantSite {
        site: Vec<i64>,
        order: usize,
        basis: Vec<Vec<i64>>,
    },

    #[error("site k={site:?} too close to the basis boundary: needs margin {needed}, has {available}")]
    BoundaryProximity {
        site: Vec<i64>,
        needed: i64,
        available: i64,
    },

    #[error("Monte Carlo requires a positive sample count")]
    ZeroSamples,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
