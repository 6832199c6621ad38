//! Scenario files, the reproducible experiments and their reports, on top of
//! [`altcipher_core`].

pub mod experiments;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod spec;

pub use experiments::{run_amplifier, run_collapse, run_expand, run_general_collapse, Check, ExperimentResult, Setup};
pub use runner::{run_scenario, RunError};
pub use scenario::{parse_scenario, DistSpec, Scenario, ScenarioError};
pub use spec::{parse_perm, parse_rational, parse_vector, GroupSpec, SpecError};
