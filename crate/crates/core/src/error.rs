use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pattern parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed pattern: {0}")]
    MalformedPattern(String),

    #[error("pattern has {pattern} vertices but the host only has {host}")]
    PatternLargerThanHost { pattern: usize, host: usize },

    #[error("vertex {vertex} out of range for host of size {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("color {color} out of range [1, {k}]")]
    ColorOutOfRange { color: u64, k: u32 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("scale guard exceeded: {what} needs {needed}, limit is {limit}")]
    ScaleGuard { what: String, needed: u128, limit: u128 },

    #[error("host size {host} is invalid: {reason}")]
    InvalidHost { host: usize, reason: String },

    #[error("not a subgraph: {0}")]
    NotSubgraph(String),

    #[error("slack too small: need {needed} extra vertices, have {available}")]
    SlackTooSmall { needed: usize, available: usize },

    #[error("anchor not usable: {0}")]
    AnchorUnusable(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("resample budget of {budget} exhausted with {bad_copies} bad copies left")]
    BudgetExhausted { budget: u64, bad_copies: u64 },

    #[error("construction failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier, used in CSV rows and logs.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::MalformedPattern(_) => "malformed_pattern",
            Error::PatternLargerThanHost { .. } => "pattern_larger_than_host",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::ColorOutOfRange { .. } => "color_out_of_range",
            Error::SizeMismatch(_) => "size_mismatch",
            Error::Parse { .. } => "parse",
            Error::ScaleGuard { .. } => "scale_guard",
            Error::InvalidHost { .. } => "invalid_host",
            Error::NotSubgraph(_) => "not_subgraph",
            Error::SlackTooSmall { .. } => "slack_too_small",
            Error::AnchorUnusable(_) => "anchor_unusable",
            Error::InvalidCertificate(_) => "invalid_certificate",
            Error::BudgetExhausted { .. } => "budget_exhausted",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
