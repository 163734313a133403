//! Contract phase, receding-horizon year loop, expected-value baseline and
//! run comparison.

mod compare;
mod contracts;
mod sources;
mod year;

pub use compare::{compare_runs, Comparison, ComparisonRow, AGGREGATE_SAMPLE};
pub use contracts::{
    evaluate_plan, expected_value_contract_phase, run_contract_phase, solve_contract_phase,
    value_of_stochastic_solution, ContractInputs, ContractPhase, Vss,
};
pub use sources::{ArchiveSource, ExpectedSource, FnSource, Sample, ScenarioSource};
pub use year::{run_expected_value_baseline, run_receding_year, RunMeta, RunOptions, YearResult};

use std::path::{Path, PathBuf};

use crate::domain::DomainError;
use crate::milp::{emit_mps, Model};
use crate::phase1::Phase1Error;
use crate::phase2::Phase2Error;
use crate::scengen::ScenGenError;

#[derive(Debug, thiserror::Error)]
pub enum StepError {
    #[error(transparent)]
    Scenarios(#[from] ScenGenError),
    #[error(transparent)]
    Operation(#[from] Phase2Error),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

impl StepError {
    fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            StepError::Operation(Phase2Error::NoSolution(_) | Phase2Error::Milp(_))
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OrchestratorError {
    #[error("week {}: {source}{}", week + 1, dumped(dump))]
    Week {
        /// 0-based.
        week: usize,
        #[source]
        source: StepError,
        dump: Option<PathBuf>,
    },
    #[error("contract phase: {source}{}", dumped(dump))]
    Contracts {
        #[source]
        source: Phase1Error,
        dump: Option<PathBuf>,
    },
    #[error(transparent)]
    Scenarios(#[from] ScenGenError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Input(String),
    #[error("mismatched sample sets: {0}")]
    MismatchedSamples(String),
}

impl OrchestratorError {
    /// True when a solver run failed or returned no usable solution.
    pub fn is_solver_failure(&self) -> bool {
        match self {
            OrchestratorError::Week { source, .. } => source.is_solver_failure(),
            OrchestratorError::Contracts { source, .. } => {
                matches!(source, Phase1Error::NoSolution(_) | Phase1Error::Milp(_))
            }
            _ => false,
        }
    }
}

fn dumped(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map(|p| format!(" (model written to {})", p.display()))
        .unwrap_or_default()
}

/// Writes `model` as `{dir}/{file}`; failures to write are swallowed since
/// the dump only decorates an error that is already being reported.
fn dump_model(dir: Option<&Path>, file: &str, model: &Model) -> Option<PathBuf> {
    let dir = dir?;
    std::fs::create_dir_all(dir).ok()?;
    let path = dir.join(file);
    std::fs::write(&path, emit_mps(model)).ok()?;
    Some(path)
}

pub type Result<T> = std::result::Result<T, OrchestratorError>;
