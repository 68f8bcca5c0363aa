use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("branching factor must be at least 1, got {0}")]
    InvalidBranching(u32),
    #[error("child index {index} out of range for k = {k}")]
    ChildOutOfRange { index: u32, k: u32 },
    #[error("enumeration refused: {size} vertices exceeds cap {cap}")]
    EnumerationCap { size: String, cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{base}^({exponent}) is not rational; use a floating backend")]
    Inexact { base: String, exponent: String },
    #[error("{0} is not representable in a nonnegative backend")]
    Negative(String),
    #[error("zero raised to non-positive power {0}")]
    ZeroPower(String),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("enclosure bounds out of order: {lower} > {upper}")]
    Inverted { lower: String, upper: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("negative value {0} rejected: weights are nonnegative")]
    Negative(String),
    #[error("level masses do not sum: tail ratio {ratio} times k = {k} is at least 1")]
    Divergent { ratio: String, k: u32 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("malformed function JSON: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    /// The averages grow without bound in the radius; `growth` is the
    /// per-unit-radius ratio of the witness sequence.
    #[error("maximal function diverges: sphere averages grow by factor {growth} per unit radius")]
    Divergent { growth: String },
    #[error("operation requires k >= 2")]
    UnsupportedBranching,
    #[error("Hoelder exponent must exceed 1, got {0}")]
    BadExponent(String),
    #[error("radial superlevel sets of profiles with an infinite tail need a level window")]
    UnboundedSupport,
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
