use std::path::Path;

use super::{dump_model, OrchestratorError, Result};
use crate::domain::{incentive_schedule, ContractSpec, PlantConfig, Resolution, ScenarioSet};
use crate::milp::{evaluate_solution, Assignment, SolverBackend};
use crate::phase1::{
    build_contract_model, extract_contract_plan, fix_first_stage, ContractModel,
    ContractModelOptions, ContractPlan, Phase1Error, WeeklyPrices,
};
use crate::scengen::{historical_scenarios, Archive};

/// Weekly scenarios, expected prices and option incentive of the contract
/// model.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractInputs {
    pub scenarios: ScenarioSet,
    pub prices: WeeklyPrices,
    pub psi: Vec<f64>,
}

impl ContractInputs {
    /// One weekly scenario per archive year over the plant's planning year.
    pub fn from_archive(archive: &Archive, weeks: usize) -> Result<Self> {
        let scenarios = historical_scenarios(archive, 0, weeks, Resolution::Weekly)?;
        Self::from_scenarios(scenarios)
    }

    pub fn from_scenarios(scenarios: ScenarioSet) -> Result<Self> {
        Ok(ContractInputs {
            prices: WeeklyPrices::expected(&scenarios),
            psi: incentive_schedule(&scenarios)?,
            scenarios,
        })
    }

    /// Same prices and incentive, demand collapsed to its expectation.
    pub fn expected_value(&self) -> Self {
        ContractInputs {
            scenarios: self.scenarios.expectation(),
            prices: self.prices.clone(),
            psi: self.psi.clone(),
        }
    }
}

/// Solved contract model.
#[derive(Debug, Clone)]
pub struct ContractPhase {
    pub plan: ContractPlan,
    pub objective: f64,
    pub max_violation: f64,
    pub model: ContractModel,
    pub assignment: Assignment,
}

fn solve(
    backend: &SolverBackend,
    cm: ContractModel,
    dump_dir: Option<&Path>,
) -> Result<(ContractModel, Assignment, f64)> {
    let fail = |source: Phase1Error, cm: &ContractModel| OrchestratorError::Contracts {
        source,
        dump: dump_model(dump_dir, "contracts.mps", &cm.model),
    };
    let a = match backend.solve(&cm.model) {
        Ok(a) => a,
        Err(e) => return Err(fail(e.into(), &cm)),
    };
    if !a.status.has_solution() {
        let msg = format!("{:?}: {}", a.status, a.diagnostics.trim());
        return Err(fail(Phase1Error::NoSolution(msg), &cm));
    }
    let e = evaluate_solution(&cm.model, &a).map_err(|e| fail(e.into(), &cm))?;
    let v = e.max_violation.max(e.max_integrality_violation);
    Ok((cm, a, v))
}

fn contracts_err(source: Phase1Error) -> OrchestratorError {
    OrchestratorError::Contracts { source, dump: None }
}

/// Builds, solves and extracts the contract plan for `inputs`.
pub fn solve_contract_phase(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    inputs: &ContractInputs,
    dump_dir: Option<&Path>,
) -> Result<ContractPhase> {
    let cm = build_contract_model(
        plant,
        contracts,
        &inputs.scenarios,
        &inputs.prices,
        &inputs.psi,
        ContractModelOptions::default(),
    )
    .map_err(contracts_err)?;
    let (cm, a, max_violation) = solve(backend, cm, dump_dir)?;
    let plan = extract_contract_plan(&cm, contracts, &a).map_err(contracts_err)?;
    Ok(ContractPhase {
        plan,
        objective: cm.model.objective().eval(&a.values),
        max_violation,
        model: cm,
        assignment: a,
    })
}

/// Stochastic contract phase on the archive's historical years.
pub fn run_contract_phase(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    archive: &Archive,
    dump_dir: Option<&Path>,
) -> Result<ContractPhase> {
    let inputs = ContractInputs::from_archive(archive, plant.weeks)?;
    solve_contract_phase(backend, plant, contracts, &inputs, dump_dir)
}

/// Contract phase on the expected-value scenario of `inputs`.
pub fn expected_value_contract_phase(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    inputs: &ContractInputs,
    dump_dir: Option<&Path>,
) -> Result<ContractPhase> {
    solve_contract_phase(
        backend,
        plant,
        contracts,
        &inputs.expected_value(),
        dump_dir,
    )
}

/// Expected objective of the contract model over `inputs` with the
/// first stage pinned to `plan`, and the solution's largest violation.
pub fn evaluate_plan(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    inputs: &ContractInputs,
    plan: &ContractPlan,
) -> Result<(f64, f64)> {
    let mut cm = build_contract_model(
        plant,
        contracts,
        &inputs.scenarios,
        &inputs.prices,
        &inputs.psi,
        ContractModelOptions::default(),
    )
    .map_err(contracts_err)?;
    fix_first_stage(&mut cm, plan).map_err(contracts_err)?;
    let (cm, a, v) = solve(backend, cm, None)?;
    Ok((cm.model.objective().eval(&a.values), v))
}

/// Stochastic and expected-value plans, both priced on the stochastic
/// scenario set.
#[derive(Debug, Clone)]
pub struct Vss {
    pub stochastic: ContractPhase,
    pub expected_value: ContractPhase,
    /// Expected cost of the expected-value plan over the stochastic set.
    pub expected_value_cost: f64,
    pub expected_value_violation: f64,
}

impl Vss {
    /// Cost of the expected-value plan minus cost of the stochastic plan.
    pub fn value(&self) -> f64 {
        self.expected_value_cost - self.stochastic.objective
    }
}

pub fn value_of_stochastic_solution(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    inputs: &ContractInputs,
) -> Result<Vss> {
    let stochastic = solve_contract_phase(backend, plant, contracts, inputs, None)?;
    let expected_value = expected_value_contract_phase(backend, plant, contracts, inputs, None)?;
    let (cost, v) = evaluate_plan(backend, plant, contracts, inputs, &expected_value.plan)?;
    Ok(Vss {
        stochastic,
        expected_value,
        expected_value_cost: cost,
        expected_value_violation: v,
    })
}
