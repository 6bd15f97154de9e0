//! Monte Carlo experiment harness: configuration, trials, sweeps and CSV
//! output.

mod config;
mod output;
mod sweep;
mod trial;

pub use config::{Algorithm, Budget, DendrogramSpec, ExperimentConfig, GraphSpec, SnrAxis, OUT_DIR_ENV};
pub use output::{format_float, format_summary, write_csv, write_records, CSV_HEADER};
pub use sweep::{error_vs_budget_sweep, phase_transition_sweep, summarize, CellSummary, Execution, Sweep};
pub use trial::{theta, Cell, Instance, TrialOutcome, TrialRecord, EMPTY_ESTIMATE, LEDGER_TOL};
