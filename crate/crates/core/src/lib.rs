//! Quantum-inspired SMOTE oversampling and the tooling around it.
//!
//! The crate is organised by concern:
//!
//! - [`domain`]: datasets, binary class tags, seeded random streams, splits.
//! - [`quantum`]: dense statevector simulation, feature encoding and decoding.
//! - [`vqe`]: Hamiltonians, the RY+CZ ansatz and derivative-free minimisation.
//! - [`resample`]: QI-SMOTE and the classical SMOTE-family baselines.
//! - [`eval`]: kNN / logistic classifiers and the cross-validated experiment driver.
//! - [`metrics`]: confusion-matrix metrics, ROC AUC and the exact Wilcoxon signed-rank test.
//! - [`io`]: CSV, synthetic data, plot data, config files and JSON run reports.

pub mod domain;
pub mod error;
pub mod eval;
pub mod io;
pub mod metrics;
pub mod quantum;
pub mod resample;
pub mod vqe;

pub use domain::{Class, ClassCounts, Dataset, ImbalanceReport, SeedSpec, SplitMode, SplitSpec};
pub use error::{Error, Result};
pub use quantum::{NormBounds, StateVector};
pub use resample::{resample, BalanceTarget, Method, ResamplePlan, ResampleReport};
pub use vqe::{HamiltonianMode, HamiltonianSpec, VqeConfig, VqeOutcome};
