use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GglError {
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero character is not allowed here")]
    ZeroCharacter,
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("characters are linearly dependent")]
    DependentTuple,
    #[error("invalid formal group law: {0}")]
    InvalidFgl(String),
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("not strict: {0}")]
    NotStrict(String),
    #[error("nonzero constant term in composition argument")]
    ConstantTerm,
    #[error("undecidable in this presentation: {0}")]
    Undecidable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not a ring map: {0}")]
    NotRingMap(String),
    #[error("homomorphism does not descend: {0}")]
    NoDescent(String),
}

pub type Result<T> = std::result::Result<T, GglError>;
