use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EtvError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not an exponential tropical polyhedral set: {0}")]
    NotEtp(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("no certified transversal shift within {0} candidates")]
    ShiftBudget(usize),
}

pub type Result<T> = std::result::Result<T, EtvError>;
