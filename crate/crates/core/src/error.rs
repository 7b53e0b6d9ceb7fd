use thiserror::Error;

/// Errors shared by every module. The CLI maps `Internal`, `Unstabilized` and
/// `RetriesExhausted` to exit code 3 and everything else to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed-field operands: {0} vs {1}")]
    MixedFields(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("fiber component")]
    FiberComponent,
    #[error("singular, j undefined")]
    SingularJ,
    #[error("projection degenerate")]
    ProjectionDegenerate,
    #[error("linearly dependent")]
    LinearlyDependent,
    #[error("special position: {0}")]
    SpecialPosition(String),
    #[error("extend field: {0}")]
    ExtendField(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("unclassifiable over supported extensions")]
    Unclassifiable,
    #[error("truncation failed to stabilize at bound {0}")]
    Unstabilized(usize),
    #[error("inconsistent descriptor: {0}")]
    Inconsistent(String),
    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
