//! Zero-delay transmission of a scalar source over an AWGN channel:
//! companded quantization followed by orthogonal signaling and ML decoding.
//!
//! The crate designs the point density that minimizes the end-to-end
//! distortion bound, evaluates the resulting energy-distortion constants
//! against the source-coding-optimal (Panter-Dite) design and a
//! uniform-quantizer baseline, and checks the bounds with a seeded Monte
//! Carlo simulation of the full chain.
//!
//! ```
//! use zerodelay::analysis::optimize_design;
//! use zerodelay::compander::SourceModel;
//!
//! let design = optimize_design(SourceModel::UniformSymmetricUnit).unwrap();
//! assert!((design.omega - 0.3884).abs() < 2e-3);
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the range
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod compander;
pub mod error;
pub mod format;
pub mod numerics;
pub mod simulator;

pub use error::{Error, Result};
