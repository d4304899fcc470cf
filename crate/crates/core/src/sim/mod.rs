//! Scenarios, the closed-loop runner and its artefacts.

pub mod gradcheck;
pub mod output;
pub mod runner;
pub mod scenario;

pub use gradcheck::{check_gradients, check_random, ChannelCheck, GradientCheckOptions};
pub use output::{emit_outputs, objective_csv, partition_json, summary_json, trajectories_csv};
pub use runner::{mode_states, run, run_mode, RunLog, StepRecord, CONVERGENCE_TOL, MONOTONICITY_TOL};
pub use scenario::{Agent, Mode, Scenario};
