//! Sensitivity analysis for omitted variable bias in linear regression.
//!
//! The crate answers one question about an OLS treatment coefficient: how
//! strongly would an unobserved confounder have to be associated with the
//! treatment and with the outcome to overturn the estimate? It provides
//!
//! - [`ols`]: least squares by pivoted Householder QR, residualization and
//!   coefficient summaries,
//! - [`partial`]: total and partial R², signed partial correlations, Cohen's
//!   f² and the η remainder of the total-R² decomposition,
//! - [`sensitivity`]: bias magnitude, bias-adjusted estimates and the
//!   robustness values `RV_q` and `RV_{q,α}`,
//! - [`benchmark`]: formal covariate benchmarking against observed
//!   covariates, including the sign-case resolution of `R²_{Y~Z|D,X}`,
//! - [`decision`]: the three comparison rules turning bounds into verdicts,
//! - [`analysis`]: the end-to-end pipeline and contour grids,
//! - [`oracle`]: seeded data-generating processes with an observable
//!   confounder and brute-force recomputation of every quantity.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line interface live in the `ovb-sense` crate.
#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]
// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod benchmark;
pub mod dataset;
pub mod decision;
mod error;
mod linalg;
pub mod ols;
pub mod oracle;
pub mod partial;
pub mod sensitivity;
pub mod student_t;

pub use analysis::{contour_grid, run_analysis, AnalysisOptions, ContourCell, GridSpec, SensitivityReport};
pub use benchmark::{BenchmarkMode, BenchmarkSpec, BoundResult, SignCase};
pub use dataset::{Dataset, ModelSpec};
pub use decision::{verdict, Verdict};
pub use error::{Error, Result};
pub use ols::{coef_summary, fit_ols, residualize, CoefSummary, FitResult};
pub use partial::PartialQuery;
pub use sensitivity::{HypotheticalConfounder, RobustnessQuery};
