//! Exact presymplectic convexity on linear torus models.
#![allow(clippy::needless_range_loop)]
pub mod cli;
pub mod error;
pub mod lattice;
pub mod models;
pub mod morse;
pub mod polyhedra;
pub mod presymlin;
pub mod sampler;
pub mod scalars;

pub use error::{MomentError, Result};
pub use scalars::{ConstantBasis, ExtScalar};
