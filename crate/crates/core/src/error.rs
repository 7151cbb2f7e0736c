use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("construction error at atom {atom}: {reason}")]
    Construction { atom: usize, reason: String },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("axiom violation: points {0} and {1} lie below a common point but are incomparable")]
    NotTotallyOrdered(usize, usize),

    #[error("order is not antisymmetric: cycle through point {0}")]
    OrderCycle(usize),

    #[error("point ids are not a linear extension of the order: {pred} precedes {succ}")]
    NotLinearExtension { pred: usize, succ: usize },

    #[error("unknown point id {0}")]
    UnknownPoint(usize),

    #[error("set is not decreasing: {member} is included but its predecessor {missing} is not")]
    NotDecreasing { member: usize, missing: usize },

    #[error("operation requires a {expected} space")]
    UnsupportedSpace { expected: &'static str },

    #[error("ideal count exceeded cap {cap} (enumerated {partial} before stopping)")]
    EnumerationOverflow { cap: usize, partial: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid sequence for {variant}: {reason}")]
    InvalidSequence {
        variant: &'static str,
        reason: String,
    },

    #[error("weight spec parse error near `{token}`: {reason}")]
    WeightParse { token: String, reason: String },

    #[error("space spec parse error near `{token}`: {reason}")]
    SpaceParse { token: String, reason: String },

    #[error("dump parse error on line {line}: {reason}")]
    DumpParse { line: usize, reason: String },

    #[error("condition constant is infinite at p = {0}")]
    InfiniteConstant(f64),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
