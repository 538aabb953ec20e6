use crate::linalg::Ring;

/// Errors reported by liftlab operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("ring mismatch in {op}: {left:?} vs {right:?}")]
    RingMismatch {
        op: &'static str,
        left: Ring,
        right: Ring,
    },

    #[error("{op} requires ring {expected:?}, got {found:?}")]
    WrongRing {
        op: &'static str,
        expected: Ring,
        found: Ring,
    },

    #[error("unsupported modulus {0} (expected 2 or 4)")]
    UnsupportedModulus(u32),

    #[error("odd entry {value} at ({row}, {col}); expected 0 or 2 mod 4")]
    OddEntry { row: usize, col: usize, value: i64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("missing data: {0}")]
    Missing(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("size cap exceeded: {needed} unknowns > cap {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("disentangling failed at site {site}: {reason}")]
    Disentangle { site: i64, reason: String },

    #[error("local lift failed: {0}")]
    LocalLift(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
