use thiserror::Error;

/// Everything that can go wrong while building or checking an object.
///
/// Variants that name a theorem-backed check (`CheckFailed`,
/// `BrauerCorrespondentNotUnique`, `NotWellDefined`) indicate either a
/// violated precondition in the input or a bug; they are never expected on
/// valid inputs.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree {0} out of range (1..=8, p^m <= 2^20)")]
    DegreeOutOfRange(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("dimension cap exceeded: {0}")]
    DimensionCap(String),
    #[error("group order cap exceeded: {0}")]
    OrderCapExceeded(String),
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a unital subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("not a two-sided ideal: {0}")]
    NotIdeal(String),
    #[error("idempotent is not invariant: {0}")]
    NotInvariant(String),
    #[error("not a crossed product: degree {0} has no homogeneous unit")]
    NotCrossedProduct(usize),
    #[error("element is not fixed: {0}")]
    NotFixed(String),
    #[error("field characteristic {field} does not match required {required}")]
    CharMismatch { field: u32, required: u32 },
    #[error("Brauer correspondent is not unique: {0}")]
    BrauerCorrespondentNotUnique(String),
    #[error("not graded: {0}")]
    NotGraded(String),
    #[error("over-C condition violated: {0}")]
    OverCViolation(String),
    #[error("middle algebra mismatch")]
    MiddleAlgebraMismatch,
    #[error("term is not projective: {0}")]
    NotProjective(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("not well defined: {0}")]
    NotWellDefined(String),
    #[error("module is not simple: {0}")]
    NotSimple(String),
    #[error("characteristic {0} is not coprime to the group order {1}")]
    CharNotCoprime(u32, usize),
    #[error("setup mismatch: {0}")]
    SetupMismatch(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
