// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod error;
pub mod experiments;
pub mod numerics;
pub mod sphere;
pub mod transforms;

pub use error::{Error, Result};
