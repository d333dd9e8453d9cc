//! Quadratic CPU-cost models for MapReduce configurations.
//!
//! The toolkit models the total CPU cost of an application as a quadratic
//! polynomial of four tunable parameters (mapper count, reducer count,
//! block size, input size), evaluates prediction error, tests whether one
//! application's model transfers to another, and measures application
//! similarity from CPU-utilization traces. A deterministic synthetic
//! simulator stands in for a live cluster so every analysis can be checked
//! against known ground truth.
//!
//! ```
//! use mrmodel::experiment::{sample_configs, ParameterRanges};
//! use mrmodel::model::{evaluate, RegressionModel};
//! use mrmodel::simulator::{batch_simulate, AppProfile};
//!
//! let ranges = ParameterRanges::default();
//! let configs = sample_configs(100, &ranges, 42)?;
//! let runs = batch_simulate(&AppProfile::wordcount_like(), &configs, 42)?;
//! let model = RegressionModel::fit(&runs)?;
//! let report = evaluate(&model, &runs)?;
//! assert!(report.mape_percent < 10.0);
//! # Ok::<(), mrmodel::Error>(())
//! ```

pub mod error;
pub mod experiment;
pub mod io;
pub mod model;
pub mod plot;
pub mod qr;
pub mod rng;
pub mod similarity;
pub mod simulator;
pub mod types;

pub use error::{Error, Result};
pub use types::{ConfigPoint, ExperimentRun, TimeSeries};
