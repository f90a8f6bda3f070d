use thiserror::Error;

/// Which precondition of the dual construction failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotonicityKind {
    /// The time-reversed kernel is not Möbius monotone.
    Kernel,
    /// The density `nu / pi` is not a Möbius-monotone function.
    InitialDistribution,
}

impl std::fmt::Display for MonotonicityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MonotonicityKind::Kernel => f.write_str("time-reversed kernel"),
            MonotonicityKind::InitialDistribution => f.write_str("initial density nu/pi"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cover relations contain a directed cycle: {}", .cycle.join(" -> "))]
    CycleDetected { cycle: Vec<String> },

    #[error("invalid cover ({lower}, {upper}) for a poset of size {size}")]
    InvalidCover {
        lower: usize,
        upper: usize,
        size: usize,
    },

    #[error("poset must contain at least one state")]
    EmptyPoset,

    #[error("state space of size {size} exceeds the configured maximum of {max}")]
    SizeOverflow { size: usize, max: usize },

    #[error("model state space of size {size} exceeds the configured maximum of {max}")]
    TooLarge { size: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("chain is not irreducible")]
    NotIrreducible,

    #[error("linear system is singular or ill-conditioned: {0}")]
    SingularSystem(String),

    #[error("stationary distribution is not available")]
    MissingStationary,

    #[error("stationary distribution is not strictly positive at state {state}")]
    NonPositiveStationary { state: String },

    #[error("chain is not reversible (detailed-balance residual {residual:e})")]
    NotReversible { residual: f64 },

    #[error("poset has no unique maximal state (maximal states: {})", .maximal.join(", "))]
    NoUniqueMax { maximal: Vec<String> },

    #[error("{kind} is not Möbius monotone: entry ({row}, {col}) = {min_entry:e}")]
    MonotonicityViolated {
        kind: MonotonicityKind,
        min_entry: f64,
        row: String,
        col: String,
    },

    #[error("row {row} sums to {sum} instead of 1")]
    NotRowStochastic { row: String, sum: f64 },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("probability {0} is outside (0, 1]")]
    BadProbability(f64),

    #[error("chain has no absorbing state at index {index}")]
    NoAbsorbingState { index: usize },

    #[error("projection is not lumpable: states {a} and {b} differ on class {class} by {gap:e}")]
    NotLumpable {
        a: String,
        b: String,
        class: usize,
        gap: f64,
    },

    #[error("projection is not a pure-birth chain: level {from} -> {to}")]
    NotPureBirth { from: usize, to: usize },

    #[error("dual is not upper triangular: entry ({row}, {col}) = {value:e}")]
    NotTriangular {
        row: String,
        col: String,
        value: f64,
    },

    #[error("trajectory exceeded {max_steps} steps without absorption")]
    MaxStepsExceeded { max_steps: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
