//! Experiment layer: inequality checks on the k-ary tree, finite-tree
//! experiments, reports, and the acceptance criteria.
// `!(x > 0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abstract_trees;
pub mod error;
pub mod inequality;
pub mod report;
pub mod verify;

pub use error::LabError;
pub use report::{ConstantReport, GridPoint};
