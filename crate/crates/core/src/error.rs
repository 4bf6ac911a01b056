use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },

    #[error("{line}: equation is identically zero")]
    ZeroEquation { line: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("malformed equation set: {0}")]
    MalformedEquations(String),

    #[error("no owner-absent perfect matching exists")]
    NoPerfectMatching,

    #[error("equation {index} is a nonzero constant; the variety is empty")]
    ConstantEquation { index: usize },

    #[error("leading coefficient is zero")]
    LeadingCoefficientZero,

    #[error("box hypothesis violated at point {point}: {reason}")]
    BoxHypothesis { point: String, reason: String },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("radius hits zero set at angle {angle}")]
    RadiusHitsZeroSet { angle: f64 },

    #[error("winding refinement did not converge after {samples} samples")]
    NonConvergent { samples: usize },
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}
