use thiserror::Error;

/// Errors raised by the torsion library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid homology basis in degree {degree}: {reason}")]
    InvalidHomologyBasis { degree: usize, reason: String },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown generator `{name}` at line {line}, column {column}")]
    UnknownGenerator { name: String, line: usize, column: usize },

    #[error("invalid two-bridge knot ({p}, {q}): {reason}")]
    InvalidKnot { p: i64, q: i64, reason: String },

    #[error("longitude invalid: check `{check}` failed ({detail})")]
    LongitudeInvalid { check: &'static str, detail: String },

    #[error("degenerate trace {re}{im:+}i: meridian trace must differ from +-2")]
    DegenerateTrace { re: f64, im: f64 },

    #[error("solver inconsistency: {0}")]
    SolverInconsistency(String),

    #[error("non-generic trace {re}{im:+}i: {reason}; retry at a nearby trace value")]
    NonGeneric { re: f64, im: f64, reason: String },

    #[error("wrong representation kind: {0}")]
    WrongKind(String),

    #[error("cochain assembly error: {0}")]
    Assembly(String),

    #[error("boundary-class error: {0}")]
    BoundaryClass(String),

    #[error("regularity failure: {0}")]
    Regularity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn non_generic(c: num_complex::Complex64, reason: impl Into<String>) -> Self {
        Error::NonGeneric {
            re: c.re,
            im: c.im,
            reason: reason.into(),
        }
    }
}
