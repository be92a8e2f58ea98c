use thiserror::Error;

/// Failures surfaced by the library. Every variant carries enough context to
/// locate the offending block, relation or parameter.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("singular block ({src} -> {dst}), condition estimate {condition:.3e}")]
    SingularBlock {
        src: String,
        dst: String,
        condition: f64,
    },

    #[error("eigenvalue clusters {a} and {b} are only {distance:.3e} apart")]
    ClusterAmbiguity { a: String, b: String, distance: f64 },

    #[error("eigenvalue cluster at {0} is numerically zero")]
    ZeroEigenvalue(String),

    #[error("model is not closable: {which} is singular on block ({src} -> {dst})")]
    NotClosable {
        which: String,
        src: String,
        dst: String,
    },

    #[error("q - q^-1 vanishes; BMW generators are undefined")]
    MuZero,

    #[error("weight is not an enhancement on the {side} side: {detail}")]
    NotEnhanced { side: String, detail: String },

    #[error("Drinfeld operator {0} is not invertible")]
    NonInvertibleDrinfeld(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quantum dimension vanishes at vertex {0}")]
    ZeroUnknot(String),

    #[error("path space of degree {degree} has {paths} paths; dense limit is {limit}")]
    PathSpaceTooLarge {
        degree: usize,
        paths: usize,
        limit: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
