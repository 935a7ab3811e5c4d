use thiserror::Error;

/// Every failure the library can report.
///
/// The variants line up with the CLI exit codes: parameter problems,
/// resource caps, mathematical contract violations and internal bugs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("{what} = {value} exceeds the cap {cap}")]
    CapExceeded { what: String, value: u64, cap: u64 },
    #[error("contract violation in {name}: {detail}")]
    ContractViolation { name: String, detail: String },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unknown component id {0}")]
    UnknownComponent(usize),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Self::Parameter(msg.into())
    }

    pub fn contract(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::ContractViolation {
            name: name.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
