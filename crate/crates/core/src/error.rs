use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("configuration: {0}")]
    Config(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("centrifugal term is singular at r = 0 (l~(l~+1) = {0})")]
    CentrifugalSingularity(f64),

    #[error("effective potential has no minimum")]
    NoExtremum,

    #[error("closed-form expression is not evaluable: {0}")]
    FormulaInvalid(String),

    #[error("normalization integral diverges: {0}")]
    DivergentNormalization(String),

    #[error("no eigenvalue with {nodes} nodes in [{lo}, {hi}] MeV")]
    NoEigenvalueInBracket { nodes: u32, lo: f64, hi: f64 },

    #[error("shooting did not converge after {0} iterations")]
    NotConverged(usize),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
