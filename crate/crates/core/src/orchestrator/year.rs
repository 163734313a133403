use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{
    dump_model, expected_value_contract_phase, ArchiveSource, ContractInputs, ContractPhase,
    ExpectedSource, OrchestratorError, Result, Sample, ScenarioSource, StepError,
};
use crate::domain::{ContractSpec, PlantConfig, SystemState};
use crate::milp::SolverBackend;
use crate::phase1::ContractPlan;
use crate::phase2::{
    build_operational_model, fix_and_realize, plan_week, realize_week, Phase2Error, WeeklyResult,
};
use crate::scengen::{derive_seed, Archive, Method};

/// Receding-horizon settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Weeks per operational model, W.
    pub horizon: usize,
    pub seed: u64,
    /// Where the MPS file of a failed solve is written.
    pub dump_dir: Option<PathBuf>,
}

impl RunOptions {
    pub fn new(horizon: usize, seed: u64) -> Self {
        RunOptions {
            horizon,
            seed,
            dump_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    /// Scenario method label, `EV` for the expected-value baseline.
    pub method: String,
    pub horizon: usize,
    pub seed: u64,
    pub sample: String,
}

/// Realized outcome of one simulated year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearResult {
    pub meta: RunMeta,
    pub weekly: Vec<WeeklyResult>,
    /// Expected objective of each week's receding-horizon model.
    pub planned: Vec<f64>,
    pub total: f64,
    pub penalty_total: f64,
    /// MWh
    pub missed_total: f64,
}

impl YearResult {
    pub fn new(meta: RunMeta, weekly: Vec<WeeklyResult>, planned: Vec<f64>) -> Self {
        YearResult {
            total: weekly.iter().map(|w| w.total).sum(),
            penalty_total: weekly.iter().map(|w| w.costs.penalties()).sum(),
            missed_total: weekly.iter().map(|w| w.missed_heat).sum(),
            meta,
            weekly,
            planned,
        }
    }

    /// Broken accounting or state-continuity invariants, one message each.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let sum: f64 = self.weekly.iter().map(|w| w.total).sum();
        if sum != self.total {
            out.push(format!(
                "total {} != sum of weekly totals {sum}",
                self.total
            ));
        }
        for (i, w) in self.weekly.iter().enumerate() {
            if w.week != i {
                out.push(format!("row {i} holds week {}", w.week));
            }
            if (w.total - w.costs.total()).abs() > 1e-9 * (1.0 + w.total.abs()) {
                out.push(format!("week {}: total differs from its components", i + 1));
            }
        }
        for pair in self.weekly.windows(2) {
            if pair[1].start_state != pair[0].end_state {
                out.push(format!(
                    "week {} does not start where week {} ended",
                    pair[1].week + 1,
                    pair[0].week + 1
                ));
            }
        }
        out
    }
}

fn week_err(
    week: usize,
    source: impl Into<StepError>,
    dump: impl FnOnce() -> Option<PathBuf>,
) -> OrchestratorError {
    let source = source.into();
    let dump = if source.is_solver_failure() {
        dump()
    } else {
        None
    };
    OrchestratorError::Week { week, source, dump }
}

/// Runs the weekly plan-then-realize loop over the plan's weeks.
///
/// Week `w` solves the operational model over weeks `w..w + W` (truncated
/// at the end of the plan), commits its first week and evaluates that week
/// against the sample; the realized end state starts week `w + 1`.
#[allow(clippy::too_many_arguments)]
pub fn run_receding_year(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    plan: &ContractPlan,
    sample: &Sample,
    source: &dyn ScenarioSource,
    opts: &RunOptions,
) -> Result<YearResult> {
    let n_weeks = plan.n_weeks();
    if opts.horizon == 0 {
        return Err(OrchestratorError::Input(
            "horizon must be at least one week".into(),
        ));
    }
    if sample.n_weeks() < n_weeks {
        return Err(OrchestratorError::Input(format!(
            "sample {} covers {} weeks, the plan {n_weeks}",
            sample.id,
            sample.n_weeks()
        )));
    }
    plan.validate(contracts)
        .map_err(|e| OrchestratorError::Input(e.to_string()))?;
    let dump_dir = opts.dump_dir.as_deref();

    let mut state = SystemState::initial(plant);
    let mut weekly = Vec::with_capacity(n_weeks);
    let mut planned = Vec::with_capacity(n_weeks);
    for w in 0..n_weeks {
        let n = opts.horizon.min(n_weeks - w);
        let seed = derive_seed(opts.seed, w as u64, "scenarios");
        let scenarios = source
            .scenarios(w, n, sample, seed)
            .map_err(|e| week_err(w, e, || None))?;
        let pw =
            plan_week(backend, plant, contracts, plan, w, &scenarios, &state).map_err(|e| {
                week_err(w, e, || {
                    let om = build_operational_model(plant, contracts, plan, w, &scenarios, &state)
                        .ok()?;
                    dump_model(dump_dir, &format!("week_{:02}_plan.mps", w + 1), &om.model)
                })
            })?;
        let realized = sample.week(w).map_err(|e| match e {
            OrchestratorError::Input(m) => week_err(w, Phase2Error::Grid(m), || None),
            other => other,
        })?;
        let r = realize_week(
            backend,
            plant,
            contracts,
            plan,
            &pw.decisions,
            &realized,
            &state,
        )
        .map_err(|e| {
            week_err(w, e, || {
                let om = fix_and_realize(plant, contracts, plan, &pw.decisions, &realized, &state)
                    .ok()?;
                dump_model(
                    dump_dir,
                    &format!("week_{:02}_realize.mps", w + 1),
                    &om.model,
                )
            })
        })?;
        log::info!(
            "{} W={} week {}/{n_weeks}: planned {:.2}, realized {:.2}",
            sample.id,
            opts.horizon,
            w + 1,
            pw.expected.total(),
            r.total
        );
        state = r.end_state.clone();
        planned.push(pw.expected.total());
        weekly.push(r);
    }
    let meta = RunMeta {
        method: source.label(),
        horizon: opts.horizon,
        seed: opts.seed,
        sample: sample.id.clone(),
    };
    Ok(YearResult::new(meta, weekly, planned))
}

/// Expected-value plan and its year run, both phases on the mean of the
/// historical years.
pub fn run_expected_value_baseline(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    archive: &Archive,
    sample: &Sample,
    opts: &RunOptions,
) -> Result<(ContractPhase, YearResult)> {
    let inputs = ContractInputs::from_archive(archive, plant.weeks)?;
    let phase = expected_value_contract_phase(
        backend,
        plant,
        contracts,
        &inputs,
        opts.dump_dir.as_deref(),
    )?;
    let source = ExpectedSource(ArchiveSource::new(archive, Method::P));
    let year = run_receding_year(
        backend,
        plant,
        contracts,
        &phase.plan,
        sample,
        &source,
        opts,
    )?;
    Ok((phase, year))
}
