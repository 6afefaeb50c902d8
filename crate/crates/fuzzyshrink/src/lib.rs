//! Fuzzy linear regression with Stein-type shrinkage.
//!
//! This crate fits linear regression models whose responses (and optionally
//! inputs) are triangular fuzzy numbers, then improves the fitted
//! coefficients by componentwise shrinkage:
//!
//! - [`fuzzy_core`] — triangular fuzzy numbers and their arithmetic;
//! - [`metrics`] — goodness-of-fit distances between observed and fitted
//!   fuzzy responses (`D_{p,q}`, `D_H`, `D_LR`);
//! - [`regression`] — baseline estimators: fuzzy least squares, fuzzy least
//!   absolutes, bootstrap-averaged least squares, and a fuzzy-input fit;
//! - [`shrinkage`] — Stein-type componentwise shrinkage, the optimal
//!   shrinkage-constant search, and the improvement-region boundary;
//! - [`datasets`] — bundled reference studies and CSV ingestion;
//! - [`cli`] — the `fuzzyshrink` command-line interface.
//!
//! # Example
//!
//! ```
//! use fuzzyshrink::fuzzy_core::TriangularFuzzyNumber;
//! use fuzzyshrink::metrics::GofMetric;
//! use fuzzyshrink::regression::{fit_least_squares, CrispInputDataset};
//! use fuzzyshrink::shrinkage::{optimize_k, ShrinkagePolicy};
//!
//! let x: Vec<Vec<f64>> = (1..=5).map(|i| vec![i as f64]).collect();
//! let y = [
//!     (8.0, 1.8), (6.4, 2.2), (9.5, 2.6), (13.5, 2.6), (13.0, 2.4),
//! ]
//! .iter()
//! .map(|&(m, s)| TriangularFuzzyNumber::symmetric(m, s).unwrap())
//! .collect();
//! let data = CrispInputDataset::new("demo", x, y, true).unwrap();
//!
//! let model = fit_least_squares(&data).unwrap();
//! let report = optimize_k(
//!     &model,
//!     &data,
//!     &GofMetric::d_lr_default(),
//!     &ShrinkagePolicy::default(),
//!     None,
//!     None,
//! )
//! .unwrap();
//! assert!(report.metric_shrunk <= report.metric_baseline);
//! ```

pub mod cli;
pub mod datasets;
pub mod error;
pub mod fuzzy_core;
pub mod metrics;
pub mod regression;
pub mod shrinkage;

pub use error::{Error, Result};
pub use fuzzy_core::{Interval, TriangularFuzzyNumber};
pub use metrics::{GofMetric, GofValue};
pub use regression::{CrispInputDataset, FLRModel, FuzzyInputDataset, FuzzyInputModel};
pub use shrinkage::{ShrinkagePolicy, ShrinkageReport};
