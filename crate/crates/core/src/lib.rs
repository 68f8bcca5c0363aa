//! Maximal operators on the rooted k-ary tree.
//!
//! The core is generic over [`Scalar`]: exact rationals ([`Exact`]), floats
//! ([`Float`]) and log-domain magnitudes ([`LogScalar`]) share every
//! algorithm.
// `!(x > 0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod functions;
pub mod numerics;
pub mod operators;
pub mod tree;

pub use error::{FunctionError, NumericsError, OperatorError, TreeError};
pub use functions::{PointFunction, RadialProfile, Tail, Weight};
pub use numerics::{Enclosure, Exponent, LogScalar, Scalar};
pub use operators::{MaximalKind, OperatorConfig, SuperlevelSet};
pub use tree::{TreeParams, VertexId};

/// Exact rational backend.
pub type Exact = num_rational::BigRational;
/// Double-precision backend.
pub type Float = f64;

pub type ExactProfile = RadialProfile<Exact>;
pub type FloatProfile = RadialProfile<Float>;
pub type ExactFunction = PointFunction<Exact>;
pub type FloatFunction = PointFunction<Float>;
