// `!(x > 0.0)` is deliberate: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cover;
pub mod eigensolver;
pub mod error;
pub mod experiments;
pub mod gauge;
pub mod geometry;
pub mod graph;
pub mod nodal;
pub mod operator;
pub mod sparse;

pub use error::{Error, Result};
