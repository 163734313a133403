use serde::{Deserialize, Serialize};

use super::{
    build_operational_model, extract_week_decisions, fix_week_decisions, OperationalModel,
    Phase2Error, Result, WeekDecisions,
};
use crate::domain::{derive_cost_series, ContractSpec, PlantConfig, ScenarioSet, SystemState};
use crate::milp::{evaluate_solution, Assignment, SolverBackend};
use crate::phase1::ContractPlan;

/// Expected cost of an operational solution split by source (€).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Contracted amounts plus option usage at base price.
    pub biomass: f64,
    pub chp_operating: f64,
    /// Start-up and shut-down costs.
    pub startup: f64,
    /// Net electricity cost; negative when sales earn more than taxes.
    pub electricity: f64,
    pub auxiliary: f64,
    pub inventory: f64,
    pub penalty_miss: f64,
    /// Storage-cap excess and safety-level shortfall.
    pub penalty_storage: f64,
    /// Emergency fuel bought when the storage runs dry.
    pub penalty_fuel: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.biomass
            + self.chp_operating
            + self.startup
            + self.electricity
            + self.auxiliary
            + self.inventory
            + self.penalty_miss
            + self.penalty_storage
            + self.penalty_fuel
    }

    pub fn penalties(&self) -> f64 {
        self.penalty_miss + self.penalty_storage + self.penalty_fuel
    }

    pub fn add(&mut self, o: &CostBreakdown) {
        self.biomass += o.biomass;
        self.chp_operating += o.chp_operating;
        self.startup += o.startup;
        self.electricity += o.electricity;
        self.auxiliary += o.auxiliary;
        self.inventory += o.inventory;
        self.penalty_miss += o.penalty_miss;
        self.penalty_storage += o.penalty_storage;
        self.penalty_fuel += o.penalty_fuel;
    }
}

/// Per-period values of one scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HourlyTrace {
    pub power: Vec<f64>,
    pub q_chp: Vec<f64>,
    pub q_aux: Vec<f64>,
    pub q_storage_out: Vec<f64>,
    pub q_miss: Vec<f64>,
    pub biomass_level: Vec<f64>,
    pub thermal_level: Vec<f64>,
    /// MWt delivered into the biomass storage.
    pub inflow: Vec<f64>,
    pub deliveries: Vec<u32>,
    pub on: Vec<bool>,
}

/// Realized cost and end state of one week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeeklyResult {
    /// Plan week, 0-based.
    pub week: usize,
    pub costs: CostBreakdown,
    pub total: f64,
    /// MWh
    pub missed_heat: f64,
    /// Σ storage-cap excess over the week (MWt).
    pub excess_storage: f64,
    pub emergency_fuel: f64,
    pub start_state: SystemState,
    pub end_state: SystemState,
    pub trace: HourlyTrace,
    /// Largest constraint or bound violation of the realization solution.
    pub max_violation: f64,
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

/// Probability-weighted cost components of a solution.
pub fn cost_breakdown(
    om: &OperationalModel,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    scenarios: &ScenarioSet,
    a: &Assignment,
) -> Result<CostBreakdown> {
    let ix = &om.index;
    let pc = &plant.costs;
    let chp = &plant.chp;
    let v = |id| a.value(id);
    let mut c = CostBreakdown {
        biomass: ix.contract_constant,
        ..CostBreakdown::default()
    };
    for (s, sc) in scenarios.scenarios().iter().enumerate() {
        let p = sc.probability;
        let costs = derive_cost_series(&sc.elec_price, &sc.fuel_price, pc, &plant.aux)?;
        for t in 0..ix.n_periods {
            for (k, &j) in ix.contracts.iter().enumerate() {
                c.biomass += p
                    * contracts[j].base_price
                    * (v(ix.used_up[k][t][s]) - v(ix.used_down[k][t][s]));
            }
            let q_chp = v(ix.q_chp_net[t][s]) + v(ix.q_chp_sto[t][s]);
            let q_aux = v(ix.q_aux_net[t][s]) + v(ix.q_aux_sto[t][s]);
            let power = v(ix.power[t][s]);
            c.chp_operating += p * pc.chp_op * (power - chp.theta * q_chp);
            c.startup += p * (pc.startup * v(ix.start[t][s]) + pc.shutdown * v(ix.stop[t][s]));
            c.electricity += p * costs.net_elec[t] * power;
            c.auxiliary += p * costs.aux[t] / plant.aux.eff * q_aux;
            c.inventory += p * plant.biomass_storage.inventory_cost * v(ix.level[t][s]);
            c.penalty_miss += p * pc.penalty_miss * v(ix.q_miss[t][s]);
            let sf = ix.shortfall[t][s].map_or(0.0, v);
            c.penalty_storage += p * pc.penalty_store * (v(ix.excess[t][s]) + sf);
            c.penalty_fuel += p * pc.penalty_miss * v(ix.emergency[t][s]);
        }
    }
    Ok(c)
}

/// State after the last period of scenario `s`.
pub fn end_state(
    om: &OperationalModel,
    plant: &PlantConfig,
    a: &Assignment,
    s: usize,
) -> SystemState {
    let ix = &om.index;
    let last = ix.n_periods - 1;
    let on: Vec<bool> = (0..ix.n_periods)
        .map(|t| a.value(ix.on[t][s]) > 0.5)
        .collect();
    let status = on[last];
    let run = on.iter().rev().take_while(|&&x| x == status).count();
    let hours = if run == ix.n_periods && status == om.state.chp_on {
        om.state.hours_in_state.saturating_add(run as u32)
    } else {
        run as u32
    };
    let ts = &plant.thermal_storage;
    SystemState {
        biomass_level: clean(a.value(ix.level[last][s])).max(0.0),
        thermal_level: a.value(ix.thermal[last][s]).clamp(ts.cap_min, ts.cap_max),
        chp_on: status,
        chp_power: if status {
            clean(a.value(ix.power[last][s])).max(0.0)
        } else {
            0.0
        },
        hours_in_state: hours,
    }
}

fn trace(om: &OperationalModel, plant: &PlantConfig, a: &Assignment, s: usize) -> HourlyTrace {
    let ix = &om.index;
    let v = |id| clean(a.value(id));
    let mut tr = HourlyTrace::default();
    for t in 0..ix.n_periods {
        tr.power.push(v(ix.power[t][s]));
        tr.q_chp.push(v(ix.q_chp_net[t][s]) + v(ix.q_chp_sto[t][s]));
        tr.q_aux.push(v(ix.q_aux_net[t][s]) + v(ix.q_aux_sto[t][s]));
        tr.q_storage_out.push(v(ix.thermal_out[t][s]));
        tr.q_miss.push(v(ix.q_miss[t][s]));
        tr.biomass_level.push(v(ix.level[t][s]));
        tr.thermal_level.push(v(ix.thermal[t][s]));
        let mut inflow = v(ix.emergency[t][s]);
        let mut n = 0;
        for k in 0..ix.contracts.len() {
            inflow += plant.biomass_storage.calorific
                * (v(ix.amount[k][t][s]) + v(ix.used_up[k][t][s]) - v(ix.used_down[k][t][s]));
            n += u32::from(a.value(ix.delivery[k][t][s]) > 0.5);
        }
        tr.inflow.push(inflow);
        tr.deliveries.push(n);
        tr.on.push(a.value(ix.on[t][s]) > 0.5);
    }
    tr
}

/// Single-scenario model of the realized week with the first-week
/// deliveries pinned to `decisions`.
pub fn fix_and_realize(
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    plan: &ContractPlan,
    decisions: &WeekDecisions,
    realized: &ScenarioSet,
    state: &SystemState,
) -> Result<OperationalModel> {
    if realized.len() != 1 || realized.grid().n_weeks() != 1 {
        return Err(Phase2Error::Grid(
            "the realization is one scenario over one week".into(),
        ));
    }
    let mut om = build_operational_model(plant, contracts, plan, decisions.week, realized, state)?;
    fix_week_decisions(&mut om, decisions)?;
    Ok(om)
}

fn solve(backend: &SolverBackend, om: &OperationalModel) -> Result<(Assignment, f64)> {
    let a = backend.solve(&om.model)?;
    if !a.status.has_solution() {
        return Err(Phase2Error::NoSolution(format!(
            "{:?}: {}",
            a.status,
            a.diagnostics.trim()
        )));
    }
    let e = evaluate_solution(&om.model, &a)?;
    Ok((a, e.max_violation.max(e.max_integrality_violation)))
}

/// Solved receding-horizon model of one week.
#[derive(Debug, Clone)]
pub struct PlannedWeek {
    pub decisions: WeekDecisions,
    pub expected: CostBreakdown,
    pub max_violation: f64,
    pub model: OperationalModel,
    pub assignment: Assignment,
}

/// Solves the stochastic operation model over `scenarios` and returns the
/// first-week decisions.
#[allow(clippy::too_many_arguments)]
pub fn plan_week(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    plan: &ContractPlan,
    week: usize,
    scenarios: &ScenarioSet,
    state: &SystemState,
) -> Result<PlannedWeek> {
    let om = build_operational_model(plant, contracts, plan, week, scenarios, state)?;
    let (a, max_violation) = solve(backend, &om)?;
    let decisions = extract_week_decisions(&om, &a)?;
    decisions.validate(contracts, plan, plant.biomass_storage.delivery_gap)?;
    Ok(PlannedWeek {
        expected: cost_breakdown(&om, plant, contracts, scenarios, &a)?,
        decisions,
        max_violation,
        model: om,
        assignment: a,
    })
}

/// Solves the realization model and reports the week's realized cost.
pub fn realize_week(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    plan: &ContractPlan,
    decisions: &WeekDecisions,
    realized: &ScenarioSet,
    state: &SystemState,
) -> Result<WeeklyResult> {
    let om = fix_and_realize(plant, contracts, plan, decisions, realized, state)?;
    let (a, max_violation) = solve(backend, &om)?;
    let costs = cost_breakdown(&om, plant, contracts, realized, &a)?;
    let tr = trace(&om, plant, &a, 0);
    Ok(WeeklyResult {
        week: decisions.week,
        total: costs.total(),
        costs,
        missed_heat: tr.q_miss.iter().sum(),
        excess_storage: (0..om.index.n_periods)
            .map(|t| clean(a.value(om.index.excess[t][0])))
            .sum(),
        emergency_fuel: (0..om.index.n_periods)
            .map(|t| clean(a.value(om.index.emergency[t][0])))
            .sum(),
        start_state: state.clone(),
        end_state: end_state(&om, plant, &a, 0),
        trace: tr,
        max_violation,
    })
}
