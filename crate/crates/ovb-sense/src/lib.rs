//! Omitted variable bias sensitivity analysis from the command line.
//!
//! The numerical work lives in [`ovb_core`]; this crate adds CSV input and
//! output, report rendering, oracle fixture export and the `ovb-sense`
//! binary.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod cli;
mod error;
pub mod fixtures;
pub mod io;
pub mod render;

pub use error::SenseError;
