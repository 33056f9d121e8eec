//! Experiment driver: sweeps an estimator over `δ` values and trials,
//! records estimates, errors and query counts, and fits scaling slopes.

mod config;
mod fit;
mod io;
mod run;

pub use config::{Algorithm, ExperimentConfig, InstanceSource, NodeSelect, ProblemVariant};
pub use fit::{failure_allowance, fit_power_law, fit_scaling, summarize, CellSummary, ScalingFit, MIN_POINTS};
pub use io::{emit, emit_to_path, load, load_path, Format, CSV_COLUMNS};
pub use run::{is_success, run_experiment, run_experiment_with_threads, TrialResult};

/// Default node-count limit for exact reference values.
pub const EXACT_CAP: usize = 20_000;
