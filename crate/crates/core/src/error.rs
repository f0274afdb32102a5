use thiserror::Error;

/// Errors raised by the library. Each variant carries a stable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("division is not exact, remainder {0}")]
    NotExact(String),
    #[error("no image given for variable {0}")]
    MissingImage(String),
    #[error("ring carries no degrees")]
    Ungraded,
    #[error("non-isolated singularity: {0}")]
    NonIsolated(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid matrix factorisation: {0}")]
    InvalidMf(String),
    #[error("defect has no source/target variable split")]
    MissingSplit,
    #[error("potential not invariant: {0}")]
    NotInvariant(String),
    #[error("idempotent strictification failed: {0}")]
    Strictify(String),
    #[error("cocycle condition fails: {0}")]
    Cocycle(String),
    #[error("module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("variable name collision: {0}")]
    VariableCollision(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "field-mismatch",
            Error::DivisionByZero => "division-by-zero",
            Error::RingMismatch(..) => "ring-mismatch",
            Error::NotExact(_) => "not-exact",
            Error::MissingImage(_) => "missing-image",
            Error::Ungraded => "ungraded",
            Error::NonIsolated(_) => "non-isolated",
            Error::Parse { .. } => "parse",
            Error::Shape(_) => "shape",
            Error::InvalidMf(_) => "invalid-mf",
            Error::MissingSplit => "missing-split",
            Error::NotInvariant(_) => "not-invariant",
            Error::Strictify(_) => "strictify",
            Error::Cocycle(_) => "cocycle",
            Error::ModuleAxiom(_) => "module-axiom",
            Error::VariableCollision(_) => "variable-collision",
            Error::Invalid(_) => "invalid",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
