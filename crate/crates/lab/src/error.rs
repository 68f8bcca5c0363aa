use thiserror::Error;
use treehl_core::{FunctionError, NumericsError, OperatorError, TreeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),
    #[error("{pairs} pairs exceed the cap {cap}")]
    PairCap { pairs: usize, cap: usize },
    #[error("k >= 2 required")]
    UnsupportedBranching,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("majorant contract violated at vertex {vertex}: M∘w = {maximal} > {dominates} * {majorant}")]
    ContractViolation { vertex: usize, maximal: f64, majorant: f64, dominates: f64 },
    #[error("malformed tree: {0}")]
    TreeFormat(String),
}
