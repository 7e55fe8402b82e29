use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate subsystem index {0}")]
    DuplicateIndex(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("operator is not involutive")]
    NotInvolutive,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("inverse of zero")]
    ZeroInverse,

    #[error("mixed fields: GF({0}) and GF({1})")]
    FieldMismatch(u64, u64),

    #[error("duplicate interpolation point x = {0}")]
    DuplicatePoint(u64),

    #[error("parity violation: {0}")]
    ParityViolation(String),

    #[error("state is not in the code space (residual {0:e})")]
    NotInCodeSpace(f64),

    #[error("subset below threshold: {got} shares, {needed} required")]
    InsufficientShares { needed: usize, got: usize },

    #[error("insufficient quantum shares: {got} held, {needed} required")]
    InsufficientQuantumShares { needed: usize, got: usize },

    #[error("missing share for player {0}")]
    MissingShare(usize),

    #[error("invalid player set: {0}")]
    InvalidPlayers(String),

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("enumeration guard: {points} points exceeds limit {limit}")]
    EnumerationGuard { points: u128, limit: u128 },

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("reduction property failed its self-check; factored verification refused")]
    ReductionUnverified,

    #[error("recovery failed: {0}")]
    Recovery(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
