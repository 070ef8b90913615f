use std::fmt;

use serde::{Deserialize, Serialize};

/// Labels of the admissibility conditions checked on porous hole sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// Summability of the radii: `sum r_j <= 1/(2^8 + 1)`.
    #[serde(rename = "(i)")]
    RadiusSum,
    /// First depth below one quarter.
    #[serde(rename = "(ii)")]
    FirstDepth,
    /// Depth decay along the successor order: `eps_{j+1} <= 3/10 eps_j`.
    #[serde(rename = "(iii)")]
    DepthDecay,
    /// Radius versus depth: `r_j <= 2^-18 eps_j^3`.
    #[serde(rename = "(iv)")]
    RadiusCubic,
    /// Consequence of (iii)+(iv): `eps_j - 2 eps_{j+1} >= r_j + 2 r_{j+1}`.
    #[serde(rename = "spacing")]
    Spacing,
    /// Closures of the holes are pairwise disjoint.
    #[serde(rename = "disjoint")]
    Disjoint,
    /// Every closed hole lies inside the open unit disk.
    #[serde(rename = "contained")]
    Contained,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::RadiusSum => "(i)",
            Condition::FirstDepth => "(ii)",
            Condition::DepthDecay => "(iii)",
            Condition::RadiusCubic => "(iv)",
            Condition::Spacing => "spacing",
            Condition::Disjoint => "disjoint",
            Condition::Contained => "contained",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("depth {depth} exceeds the representable limit {limit}: segment lengths lose resolution")]
    DepthLimit { depth: usize, limit: usize },

    #[error("invalid parameters: condition {condition} violated ({detail})")]
    InvalidParameters { condition: Condition, detail: String },

    #[error("sequence not validated, failing conditions: {}", join_labels(.0))]
    Unvalidated(Vec<Condition>),

    #[error("certification failure: {0}")]
    CertificationFailure(String),

    #[error("degenerate threshold: {0}")]
    DegenerateThreshold(String),

    #[error("grid size {requested} exceeds the configured maximum {max}")]
    MemoryLimit { requested: usize, max: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Process exit codes of the `cheeger` binary.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CONSTRAINT: i32 = 3;
    pub const CERTIFICATION: i32 = 4;
    pub const VERIFICATION: i32 = 5;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_)
            | Error::DepthLimit { .. }
            | Error::DegenerateThreshold(_)
            | Error::MemoryLimit { .. }
            | Error::Config(_) => exit::USAGE,
            Error::InvalidParameters { .. } | Error::Unvalidated(_) => exit::CONSTRAINT,
            Error::CertificationFailure(_) => exit::CERTIFICATION,
            Error::Io(_) | Error::Json(_) => exit::FAILURE,
        }
    }
}

fn join_labels(conds: &[Condition]) -> String {
    conds.iter().map(|c| c.label()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
