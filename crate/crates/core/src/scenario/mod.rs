//! Scenario runners, reports and the one-shot verification suite.
//!
//! A scenario is a [`ScenarioConfig`] turned into a [`RunReport`] plus a set
//! of CSV files. Computation and file output are separate steps:
//! [`run_scenario`] is pure and deterministic, [`write_outputs`] writes the
//! results atomically.

mod config;
mod experiments;
mod output;
mod report;
mod verify;

pub use config::{Experiment, ScenarioConfig, ShapeKind};
pub use experiments::{run_scenario, run_scenario_with_fault, Fault, ScenarioOutput};
pub use output::{emit_plot_script, write_atomic, write_outputs, PLOT_SCRIPT};
pub use report::{Check, Comparison, RunReport};
pub use verify::verify_all;
