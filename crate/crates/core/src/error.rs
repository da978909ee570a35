use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials live in different rings ({0})")]
    RingMismatch(String),
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("point {0} does not lie on the hypersurface")]
    NotOnHypersurface(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("operation requires a nonsingular point (q1 vanishes identically)")]
    SingularPoint,
    #[error("characteristic 2 is not supported")]
    Characteristic2,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} budget of {budget} exceeded")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
