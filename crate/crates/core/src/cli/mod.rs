//! Scenario files, the runner behind the `momentlab` binary, and report
//! writers.
pub mod report;
pub mod run;
pub mod scenario;

pub use run::{execute, run_scenario, validate_scenario, CliError, RunOutput};
pub use scenario::{load_scenario, parse_scenario, prepare, Analysis, Prepared, Scenario};
