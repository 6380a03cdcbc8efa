use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subspace is not contained in the given ambient subspace")]
    NotContained,

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("operator is not compatible with the weight grading: {0}")]
    WeightIncompatible(String),

    #[error("invalid dual complex: {0}")]
    InvalidDualComplex(String),

    #[error("invalid strata cohomology: {}", .0.join("; "))]
    InvalidStrata(Vec<String>),

    #[error("sign convention failure: {0}")]
    SignConvention(String),

    #[error("invalid finite field: {0}")]
    InvalidField(String),

    #[error("characteristic 2 is excluded")]
    CharacteristicTwo,

    #[error("point is not on the variety")]
    NotOnVariety,

    #[error("point is not a critical point of the pencil")]
    NotCritical,

    #[error("search space too large: {0}")]
    TooLarge(String),

    #[error("pencil is degenerate: {0}")]
    DegeneratePencil(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("power series is not a unit")]
    NotAUnit,

    #[error("insufficient precision: need at least {needed}, got {got}")]
    InsufficientPrecision { needed: u32, got: u32 },

    #[error("wrong Weierstrass degree: expected {expected}, found {found:?}")]
    WrongWeierstrassDegree { expected: u32, found: Option<u32> },
}

pub type Result<T> = std::result::Result<T, Error>;
