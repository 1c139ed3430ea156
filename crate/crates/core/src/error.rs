//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by analyses, loaders and algebraic routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("trail endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("invalid trail: {0}")]
    InvalidTrail(String),
    #[error("unsupported dimension {found}: {what}")]
    UnsupportedDimension { found: usize, what: String },
    #[error("no enclosing ring: {0}")]
    NoEnclosingRing(String),
    #[error("group spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group admits no nontrivial pseudonorm: {0}")]
    NoNontrivialPseudonorm(String),
    #[error("matrix dimensions incompatible: {0}")]
    NonComposable(String),
    #[error("boundary composition is nonzero: {0}")]
    NonzeroComposition(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("radius {r} is below the SFT radius {big_r}")]
    RadiusBelowSft { r: usize, big_r: usize },
    #[error("trail leaves the window at {0}")]
    TrailExitsWindow(String),
    #[error("undefined local pattern: {0}")]
    UndefinedPattern(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("value outside the designated subgroup: {0}")]
    OutsideSubgroup(String),
    #[error("cell is outside the window: {0}")]
    OutOfWindow(String),
    #[error("ambiguous path values: {0}")]
    AmbiguousPath(String),
    #[error("no domain boundary: {0}")]
    NoBoundary(String),
    #[error("defect not enclosable: {0}")]
    DefectNotEnclosable(String),
    #[error("window exhausted after {0} steps")]
    WindowExhausted(usize),
    #[error("colour graph is disconnected: {0}")]
    DisconnectedColourGraph(String),
    #[error("wrong degree: {0}")]
    WrongDegree(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
}

impl Error {
    /// Short machine-readable kind used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EndpointMismatch(_) => "endpoint-mismatch",
            Error::InvalidTrail(_) => "invalid-trail",
            Error::UnsupportedDimension { .. } => "unsupported-dimension",
            Error::NoEnclosingRing(_) => "no-enclosing-ring",
            Error::SpecMismatch(_) => "spec-mismatch",
            Error::InvalidGroup(_) => "invalid-group",
            Error::NoNontrivialPseudonorm(_) => "no-nontrivial-pseudonorm",
            Error::NonComposable(_) => "non-composable",
            Error::NonzeroComposition(_) => "nonzero-composition",
            Error::WindowTooSmall(_) => "window-too-small",
            Error::RadiusBelowSft { .. } => "radius-below-sft",
            Error::TrailExitsWindow(_) => "trail-exits-window",
            Error::UndefinedPattern(_) => "undefined-pattern",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::OutsideSubgroup(_) => "outside-subgroup",
            Error::OutOfWindow(_) => "out-of-window",
            Error::AmbiguousPath(_) => "ambiguous-path",
            Error::NoBoundary(_) => "no-boundary",
            Error::DefectNotEnclosable(_) => "defect-not-enclosable",
            Error::WindowExhausted(_) => "window-exhausted",
            Error::DisconnectedColourGraph(_) => "disconnected-colour-graph",
            Error::WrongDegree(_) => "wrong-degree",
            Error::Invalid(_) => "invalid-input",
            Error::Parse(_) => "parse-error",
            Error::UnknownName(_) => "unknown-name",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
