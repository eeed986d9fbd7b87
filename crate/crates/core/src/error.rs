use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("sensing ranges must satisfy delta_a > delta_b > 0 (got delta_a = {delta_a}, delta_b = {delta_b})")]
    SensingRanges { delta_a: f64, delta_b: f64 },

    #[error("graph violates the tail/head separation assumption: nodes {0:?} are both tail and head of unidirectional edges")]
    TailHeadOverlap(Vec<usize>),

    #[error("requested group-A nodes {0:?} are heads of unidirectional edges")]
    HintOnHeads(Vec<usize>),

    #[error("assignment problem has {minority} minority points but only {majority} majority points")]
    AssignmentShape { minority: usize, majority: usize },

    #[error("brute-force assignment limited to {limit} minority points (got {got})")]
    BruteForceLimit { got: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("state is not a matched configuration: {0}")]
    NotMatched(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
