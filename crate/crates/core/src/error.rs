use thiserror::Error;

/// Errors produced by frame construction, decoding and bound evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nodes {0} and {1} coincide (1-based)")]
    DuplicateNode(usize, usize),
    #[error("node {0} is zero (1-based)")]
    ZeroNode(usize),
    #[error("frame needs at least N = {n} nodes, got {m}")]
    TooFewNodes { m: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid sparse representation: {0}")]
    InvalidSparseRep(String),
    #[error("operation requires a Vandermonde frame")]
    NotVandermonde,
    #[error("enumeration of {count:.3e} subsets exceeds the budget of {budget}")]
    BudgetExceeded { count: f64, budget: u64 },
    #[error("support contains a singular N-subset")]
    DegenerateSupport,
    #[error("numeric breakdown: {0}")]
    NumericBreakdown(String),
    #[error("located {found} roots but the locator has degree {degree}")]
    RootCountMismatch { found: usize, degree: usize },
    #[error("Forney denominator vanished at location {0} (1-based)")]
    DegenerateDenominator(usize),
    #[error("division by the zero polynomial")]
    DivideByZeroPoly,
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("sparsity L = {l} is outside the branch range [{lo}, {hi}] for N = {n}")]
    BranchError { n: usize, l: usize, lo: usize, hi: usize },
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("malformed frame JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
