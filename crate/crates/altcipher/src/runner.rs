//! Runs every comparison and experiment listed in a scenario.

use altcipher_core::{compare_q, Coherence, Result};

use crate::experiments::{run_amplifier, run_collapse, run_expand, run_general_collapse, Check, ExperimentResult, Setup};
use crate::scenario::{Comparison, Expectation, ExperimentSpec, Scenario};
use crate::spec::SpecError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Core(#[from] altcipher_core::Error),
}

fn accepts(expect: Option<Expectation>, c: Coherence) -> bool {
    match expect {
        None => true,
        Some(Expectation::Left) => matches!(c, Coherence::LeftMoreSecure | Coherence::Equivalent),
        Some(Expectation::Right) => matches!(c, Coherence::RightMoreSecure | Coherence::Equivalent),
        Some(Expectation::Equivalent) => c == Coherence::Equivalent,
    }
}

fn expected_text(expect: Option<Expectation>) -> &'static str {
    match expect {
        None => "-",
        Some(Expectation::Left) => "left-more-secure|equivalent",
        Some(Expectation::Right) => "right-more-secure|equivalent",
        Some(Expectation::Equivalent) => "equivalent",
    }
}

/// Compares two named distributions of `scenario` at every level up to `q_max`.
pub fn run_comparison(scenario: &Scenario, cmp: &Comparison, q_max: usize) -> Result<ExperimentResult> {
    let left = &scenario.distributions[&cmp.left];
    let right = &scenario.distributions[&cmp.right];
    let report = compare_q(left, right, q_max, (&cmp.left, &cmp.right))?;
    let mut r = ExperimentResult::new("compare", format!("{} vs {}", cmp.left, cmp.right));
    for level in &report.levels {
        let c = level.coherence();
        r.checks.push(Check::holds(format!("q{}_coherence", level.q), expected_text(cmp.expect), c, accepts(cmp.expect, c)));
    }
    r.distributions.insert(cmp.left.clone(), left.clone());
    r.distributions.insert(cmp.right.clone(), right.clone());
    r.comparison = Some(report);
    Ok(r)
}

/// Level cap used when neither the caller nor the scenario sets one.
pub fn effective_q(scenario: &Scenario, q_max: Option<usize>) -> usize {
    q_max.or(scenario.q_max).unwrap_or(scenario.message_count).min(scenario.message_count)
}

pub fn run_experiment(scenario: &Scenario, spec: &ExperimentSpec, q_max: Option<usize>) -> std::result::Result<ExperimentResult, RunError> {
    let q = Some(effective_q(scenario, q_max));
    Ok(match spec {
        ExperimentSpec::Expand { subgroup, pi } => run_expand(&Setup::from_specs(&scenario.group_spec, subgroup, pi)?, q)?,
        ExperimentSpec::Collapse { subgroup, pi } => run_collapse(&Setup::from_specs(&scenario.group_spec, subgroup, pi)?, q)?,
        ExperimentSpec::GeneralCollapse { subgroup, pi, rounds } => {
            run_general_collapse(&Setup::from_specs(&scenario.group_spec, subgroup, pi)?, *rounds)?
        }
        ExperimentSpec::Amplifier { n } => run_amplifier(*n)?,
    })
}

/// Comparisons first, then experiments, each in file order.
pub fn run_scenario(scenario: &Scenario, q_max: Option<usize>) -> std::result::Result<Vec<ExperimentResult>, RunError> {
    let q = effective_q(scenario, q_max);
    let mut out = Vec::new();
    for cmp in &scenario.comparisons {
        out.push(run_comparison(scenario, cmp, q)?);
    }
    for spec in &scenario.experiments {
        out.push(run_experiment(scenario, spec, q_max)?);
    }
    Ok(out)
}
