//! Arbitrary-precision numerics for the figure-eight knot at `q = e^{ξ/N}`.
//!
//! [`jones`] evaluates the colored Jones values exactly. [`qdilog`] builds the
//! quantum dilogarithm `T_N` as a contour integral, and [`asymptotics`] uses
//! it to rebuild the Jones sum and its large-`N` predictor. The `SL(2; ℂ)`
//! representations attached to `ξ` live in [`representations`].
//!
//! Every numeric entry point takes a [`PrecisionContext`]. Computation runs
//! with guard bits and the result is rounded once to the requested precision.

// `!(a < b)` is used on purpose so that NaN fails every domain check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod jones;
pub mod precision;
pub mod qdilog;
pub mod quadrature;
pub mod representations;
pub mod special;

pub use error::{Error, Result};
pub use precision::{BigComplex, BigFloat, PrecisionContext};
