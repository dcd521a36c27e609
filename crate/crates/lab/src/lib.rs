//! Experiment harness: JSON configs, tidy result tables, scaling fits and
//! SVG plots on top of `lifshitz-core`.

pub mod config;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod plot;
pub mod table;

pub use config::{ExperimentConfig, ExperimentKind, Format, Params};
pub use error::{LabError, LabResult};
pub use experiments::run_experiment;
pub use fit::{scaling_fit, ScalingFit};
pub use table::{ResultTable, Row};
