//! Scenario files, execution and report rendering behind the `catsize` binary.

pub mod report;
pub mod reproduce;
pub mod run;
pub mod scenario;

pub use report::{from_json, render, Format, Report};
pub use reproduce::{render_reproduction, reproduce_paper, Reproduction};
pub use run::{run_scenario, RunError};
pub use scenario::{parse_scenario, parse_scenario_with, parse_state, Scenario, ScenarioError, ScenarioKind};
