use super::{Phase2Error, Result};
use crate::domain::{
    derive_cost_series, ContractSpec, PlantConfig, Resolution, ScenarioSet, SystemState,
};
use crate::milp::{LinExpr, Model, Sense, VarId, VarKind};
use crate::phase1::ContractPlan;

/// Column handles of the operational model. Per-period vectors are
/// `[t][s]`, delivery vectors `[k][t][s]` with `k` indexing `contracts`.
#[derive(Debug, Clone)]
pub struct OperationalIndex {
    /// Plan week (0-based) of the first model week.
    pub start_week: usize,
    pub n_weeks: usize,
    pub periods_per_week: usize,
    pub n_periods: usize,
    pub n_scenarios: usize,
    /// Plan indices of the contracts in the model.
    pub contracts: Vec<usize>,
    pub delivery: Vec<Vec<Vec<VarId>>>,
    pub amount: Vec<Vec<Vec<VarId>>>,
    pub used_up: Vec<Vec<Vec<VarId>>>,
    pub used_down: Vec<Vec<Vec<VarId>>>,
    pub level: Vec<Vec<VarId>>,
    pub outflow: Vec<Vec<VarId>>,
    pub excess: Vec<Vec<VarId>>,
    /// Safety-level shortfall; `None` in the first week.
    pub shortfall: Vec<Vec<Option<VarId>>>,
    pub emergency: Vec<Vec<VarId>>,
    pub on: Vec<Vec<VarId>>,
    pub start: Vec<Vec<VarId>>,
    pub stop: Vec<Vec<VarId>>,
    pub power: Vec<Vec<VarId>>,
    pub q_chp_net: Vec<Vec<VarId>>,
    pub q_chp_sto: Vec<Vec<VarId>>,
    pub q_aux_net: Vec<Vec<VarId>>,
    pub q_aux_sto: Vec<Vec<VarId>>,
    pub thermal: Vec<Vec<VarId>>,
    pub thermal_out: Vec<Vec<VarId>>,
    pub q_miss: Vec<Vec<VarId>>,
    /// Contracted cost of the window weeks, carried as objective constant.
    pub contract_constant: f64,
}

impl OperationalIndex {
    pub fn first_week(&self) -> std::ops::Range<usize> {
        0..self.periods_per_week
    }
}

#[derive(Debug, Clone)]
pub struct OperationalModel {
    pub model: Model,
    pub index: OperationalIndex,
    /// Initial state the model was built from.
    pub state: SystemState,
}

/// Builds the hourly stochastic operation model for plan weeks
/// `start_week..start_week + W`, W being the number of weeks in the
/// scenarios' grid.
pub fn build_operational_model(
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    plan: &ContractPlan,
    start_week: usize,
    scenarios: &ScenarioSet,
    state: &SystemState,
) -> Result<OperationalModel> {
    let grid = scenarios.grid();
    if grid.resolution() != Resolution::Hourly {
        return Err(Phase2Error::Grid("operation needs hourly scenarios".into()));
    }
    if plan.n_contracts() != contracts.len() {
        return Err(Phase2Error::Grid(format!(
            "plan has {} contracts, {} given",
            plan.n_contracts(),
            contracts.len()
        )));
    }
    let n_w = grid.n_weeks();
    if start_week + n_w > plan.n_weeks() {
        return Err(Phase2Error::MissingPlanWeek(
            plan.n_weeks().max(start_week) + 1,
        ));
    }
    state
        .validate(plant)
        .map_err(|e| Phase2Error::State(e.to_string()))?;

    let ppw = grid.periods_per_week();
    let n_t = grid.n_periods();
    let n_s = scenarios.len();
    let probs = scenarios.probabilities();
    let chp = &plant.chp;
    let bs = &plant.biomass_storage;
    let ts = &plant.thermal_storage;
    let pc = &plant.costs;
    let inf = f64::INFINITY;

    let active: Vec<usize> = (0..contracts.len())
        .filter(|&j| (start_week..start_week + n_w).any(|w| plan.week(j, w).deliveries > 0))
        .collect();
    let contract_constant: f64 = (start_week..start_week + n_w)
        .map(|w| plan.week_cost(contracts, w))
        .sum();

    let mut m = Model::new("operation");
    let tag = |t: usize, s: usize| format!("t{}_s{}", t + 1, s + 1);

    let per_ts = |m: &mut Model, sym: &str, kind: VarKind, lb: f64, ub: f64| {
        (0..n_t)
            .map(|t| {
                (0..n_s)
                    .map(|s| Ok(m.add_var(format!("{sym}_{}", tag(t, s)), kind, lb, ub)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    };

    let mut delivery = Vec::with_capacity(active.len());
    let mut amount = Vec::with_capacity(active.len());
    let mut used_up = Vec::with_capacity(active.len());
    let mut used_down = Vec::with_capacity(active.len());
    for &j in &active {
        let jj = j + 1;
        let per = |m: &mut Model, sym: &str, kind: VarKind| {
            (0..n_t)
                .map(|t| {
                    let week = start_week + t / ppw;
                    let ub = match (kind, sym) {
                        (VarKind::Binary, _) => 1.0,
                        (_, "bpu") if plan.week(j, week).up == 0.0 => 0.0,
                        (_, "bmu") if plan.week(j, week).down == 0.0 => 0.0,
                        _ => inf,
                    };
                    (0..n_s)
                        .map(|s| {
                            Ok(m.add_var(format!("{sym}_j{jj}_{}", tag(t, s)), kind, 0.0, ub)?)
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        };
        delivery.push(per(&mut m, "dh", VarKind::Binary)?);
        amount.push(per(&mut m, "b", VarKind::Continuous)?);
        used_up.push(per(&mut m, "bpu", VarKind::Continuous)?);
        used_down.push(per(&mut m, "bmu", VarKind::Continuous)?);
    }

    let level = per_ts(&mut m, "lvl", VarKind::Continuous, 0.0, inf)?;
    let outflow = per_ts(&mut m, "lout", VarKind::Continuous, 0.0, bs.max_outflow)?;
    let excess = per_ts(&mut m, "lex", VarKind::Continuous, 0.0, inf)?;
    let shortfall: Vec<Vec<Option<VarId>>> = (0..n_t)
        .map(|t| {
            (0..n_s)
                .map(|s| {
                    if t < ppw {
                        Ok(None)
                    } else {
                        Ok(Some(m.cont(format!("lsf_{}", tag(t, s)))?))
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let emergency = per_ts(&mut m, "lem", VarKind::Continuous, 0.0, inf)?;
    let on = per_ts(&mut m, "x", VarKind::Binary, 0.0, 1.0)?;
    let start = per_ts(&mut m, "y", VarKind::Binary, 0.0, 1.0)?;
    let stop = per_ts(&mut m, "z", VarKind::Binary, 0.0, 1.0)?;
    let power = per_ts(&mut m, "p", VarKind::Continuous, 0.0, inf)?;
    let q_chp_net = per_ts(&mut m, "qcn", VarKind::Continuous, 0.0, inf)?;
    let q_chp_sto = per_ts(&mut m, "qcs", VarKind::Continuous, 0.0, inf)?;
    let q_aux_net = per_ts(&mut m, "qan", VarKind::Continuous, 0.0, inf)?;
    let q_aux_sto = per_ts(&mut m, "qas", VarKind::Continuous, 0.0, inf)?;
    let thermal = per_ts(&mut m, "s", VarKind::Continuous, ts.cap_min, ts.cap_max)?;
    let thermal_out = per_ts(&mut m, "sout", VarKind::Continuous, 0.0, ts.max_flow)?;
    let q_miss = per_ts(&mut m, "qmiss", VarKind::Continuous, 0.0, inf)?;

    // residual minimum up/down time carried from the previous week
    let (x0, h0) = (state.chp_on, state.hours_in_state as usize);
    let residual = if x0 {
        (chp.min_up as usize).saturating_sub(h0)
    } else {
        (chp.min_down as usize).saturating_sub(h0)
    };
    for row in on.iter().take(residual.min(n_t)) {
        for &x in row {
            m.fix(x, if x0 { 1.0 } else { 0.0 })?;
        }
    }
    let x0f = if x0 { 1.0 } else { 0.0 };

    // deliveries
    let last = n_t - 1;
    for (k, &j) in active.iter().enumerate() {
        let c = &contracts[j];
        let jj = j + 1;
        for s in 0..n_s {
            for w in 0..n_w {
                let row = plan.week(j, start_week + w);
                let hours = grid.week_periods(w);
                let wt = format!("j{jj}_w{}_s{}", w + 1, s + 1);
                m.add_constraint(
                    format!("dcnt_{wt}"),
                    LinExpr::sum(hours.clone().map(|t| delivery[k][t][s])),
                    Sense::Eq,
                    row.deliveries as f64,
                )?;
                m.add_constraint(
                    format!("damt_{wt}"),
                    LinExpr::sum(hours.clone().map(|t| amount[k][t][s])),
                    Sense::Eq,
                    row.amount,
                )?;
                if row.up > 0.0 {
                    m.add_constraint(
                        format!("dup_{wt}"),
                        LinExpr::sum(hours.clone().map(|t| used_up[k][t][s])),
                        Sense::Le,
                        row.up,
                    )?;
                }
                if row.down > 0.0 {
                    m.add_constraint(
                        format!("ddn_{wt}"),
                        LinExpr::sum(hours.map(|t| used_down[k][t][s])),
                        Sense::Le,
                        row.down,
                    )?;
                }
            }
            for t in 0..n_t {
                let jt = format!("j{jj}_{}", tag(t, s));
                let mut e = LinExpr::term(amount[k][t][s], 1.0);
                e.push(used_up[k][t][s], 1.0)
                    .push(delivery[k][t][s], -c.amount_max);
                m.add_constraint(format!("dub_{jt}"), e, Sense::Le, 0.0)?;
                let mut e = LinExpr::term(amount[k][t][s], 1.0);
                e.push(used_down[k][t][s], -1.0)
                    .push(delivery[k][t][s], -c.amount_min);
                m.add_constraint(format!("dlb_{jt}"), e, Sense::Ge, 0.0)?;
            }
            // windows cut by the horizon start are implied by the first full one
            let f = c.freq as usize;
            for t in f.min(last)..n_t {
                m.add_constraint(
                    format!("freq_j{jj}_{}", tag(t, s)),
                    LinExpr::sum((t.saturating_sub(f)..=t).map(|u| delivery[k][u][s])),
                    Sense::Le,
                    1.0,
                )?;
            }
        }
    }
    if !active.is_empty() {
        let gap = bs.delivery_gap as usize;
        for s in 0..n_s {
            // windows cut by the horizon end are implied by the last full one
            for t in 0..=last.saturating_sub(gap) {
                let end = (t + gap).min(last);
                let e = LinExpr::sum(
                    (0..active.len())
                        .flat_map(|k| (t..=end).map(move |u| (k, u)))
                        .map(|(k, u)| delivery[k][u][s]),
                );
                m.add_constraint(format!("wait_{}", tag(t, s)), e, Sense::Le, 1.0)?;
            }
        }
    }

    // non-anticipativity of first-week deliveries
    for k in 0..active.len() {
        let jj = active[k] + 1;
        for t in 0..ppw {
            for s in 1..n_s {
                for (sym, v) in [
                    ("dh", &delivery),
                    ("b", &amount),
                    ("bpu", &used_up),
                    ("bmu", &used_down),
                ] {
                    let mut e = LinExpr::term(v[k][t][s], 1.0);
                    e.push(v[k][t][0], -1.0);
                    m.add_constraint(format!("na_{sym}_j{jj}_{}", tag(t, s)), e, Sense::Eq, 0.0)?;
                }
            }
        }
    }

    for s in 0..n_s {
        let sc = &scenarios.scenarios()[s];
        for t in 0..n_t {
            let ts_ = tag(t, s);
            // biomass storage
            let mut e = LinExpr::term(level[t][s], 1.0);
            e.push(outflow[t][s], 1.0).push(emergency[t][s], -1.0);
            for k in 0..active.len() {
                e.push(amount[k][t][s], -bs.calorific)
                    .push(used_up[k][t][s], -bs.calorific)
                    .push(used_down[k][t][s], bs.calorific);
            }
            let rhs = if t == 0 {
                state.biomass_level
            } else {
                e.push(level[t - 1][s], -1.0);
                0.0
            };
            m.add_constraint(format!("bal_{ts_}"), e, Sense::Eq, rhs)?;
            let mut e = LinExpr::term(level[t][s], 1.0);
            e.push(excess[t][s], -1.0);
            m.add_constraint(format!("cap_{ts_}"), e, Sense::Le, bs.cap)?;
            if let Some(sf) = shortfall[t][s] {
                let week = start_week + t / ppw + 1;
                let mut e = LinExpr::term(level[t][s], 1.0);
                e.push(sf, 1.0);
                m.add_constraint(format!("sf_{ts_}"), e, Sense::Ge, bs.safety.at_week(week))?;
            }
            let mut e = LinExpr::term(outflow[t][s], 1.0);
            e.push(power[t][s], -1.0 / chp.eff_power)
                .push(q_chp_net[t][s], chp.theta / chp.eff_heat)
                .push(q_chp_sto[t][s], chp.theta / chp.eff_heat);
            m.add_constraint(format!("cons_{ts_}"), e, Sense::Eq, 0.0)?;

            // CHP operating region
            let mut e = LinExpr::term(power[t][s], 1.0);
            e.push(q_chp_net[t][s], -chp.theta)
                .push(q_chp_sto[t][s], -chp.theta);
            let mut lo = e.clone();
            lo.push(on[t][s], -chp.p_min);
            m.add_constraint(format!("pmin_{ts_}"), lo, Sense::Ge, 0.0)?;
            e.push(on[t][s], -chp.p_max);
            m.add_constraint(format!("pmax_{ts_}"), e, Sense::Le, 0.0)?;
            let mut e = LinExpr::term(q_chp_net[t][s], chp.xi);
            e.push(q_chp_sto[t][s], chp.xi).push(power[t][s], -1.0);
            m.add_constraint(format!("bp_{ts_}"), e, Sense::Le, 0.0)?;
            let mut e = LinExpr::term(q_chp_net[t][s], 1.0);
            e.push(q_chp_sto[t][s], 1.0).push(on[t][s], -chp.q_max);
            m.add_constraint(format!("qmax_{ts_}"), e, Sense::Le, 0.0)?;

            // commitment
            let mut e = LinExpr::term(start[t][s], 1.0);
            e.push(stop[t][s], -1.0).push(on[t][s], -1.0);
            let rhs = if t == 0 {
                -x0f
            } else {
                e.push(on[t - 1][s], 1.0);
                0.0
            };
            m.add_constraint(format!("stat_{ts_}"), e, Sense::Eq, rhs)?;
            m.add_constraint(
                format!("ysz_{ts_}"),
                LinExpr::sum([start[t][s], stop[t][s]]),
                Sense::Le,
                1.0,
            )?;
            let lo_up = (t + 1).saturating_sub(chp.min_up as usize);
            let mut e = LinExpr::sum((lo_up..=t).map(|u| start[u][s]));
            e.push(on[t][s], -1.0);
            m.add_constraint(format!("mup_{ts_}"), e, Sense::Le, 0.0)?;
            let lo_dn = (t + 1).saturating_sub(chp.min_down as usize);
            let mut e = LinExpr::sum((lo_dn..=t).map(|u| stop[u][s]));
            e.push(on[t][s], 1.0);
            m.add_constraint(format!("mdn_{ts_}"), e, Sense::Le, 1.0)?;

            // ramping
            let mut up = LinExpr::term(power[t][s], 1.0);
            up.push(start[t][s], -chp.p_min);
            let mut dn = LinExpr::term(power[t][s], 1.0);
            dn.push(on[t][s], chp.ramp_down).push(stop[t][s], chp.p_min);
            let (rup, rdn) = if t == 0 {
                (chp.ramp_up * x0f + state.chp_power, state.chp_power)
            } else {
                up.push(power[t - 1][s], -1.0)
                    .push(on[t - 1][s], -chp.ramp_up);
                dn.push(power[t - 1][s], -1.0);
                (0.0, 0.0)
            };
            m.add_constraint(format!("rup_{ts_}"), up, Sense::Le, rup)?;
            m.add_constraint(format!("rdn_{ts_}"), dn, Sense::Ge, rdn)?;

            // auxiliary boiler and thermal storage
            m.add_constraint(
                format!("aux_{ts_}"),
                LinExpr::sum([q_aux_net[t][s], q_aux_sto[t][s]]),
                Sense::Le,
                plant.aux.q_max,
            )?;
            m.add_constraint(
                format!("tin_{ts_}"),
                LinExpr::sum([q_chp_sto[t][s], q_aux_sto[t][s]]),
                Sense::Le,
                ts.max_flow,
            )?;
            let mut e = LinExpr::term(thermal[t][s], 1.0);
            e.push(q_chp_sto[t][s], -1.0)
                .push(q_aux_sto[t][s], -1.0)
                .push(thermal_out[t][s], 1.0);
            let mut shift = LinExpr::term(thermal_out[t][s], 1.0);
            let (rhs, shift_rhs) = if t == 0 {
                (state.thermal_level, state.thermal_level)
            } else {
                e.push(thermal[t - 1][s], -1.0);
                shift.push(thermal[t - 1][s], -1.0);
                (0.0, 0.0)
            };
            m.add_constraint(format!("tbal_{ts_}"), e, Sense::Eq, rhs)?;
            m.add_constraint(format!("tsh_{ts_}"), shift, Sense::Le, shift_rhs)?;

            let mut e = LinExpr::sum([q_chp_net[t][s], q_aux_net[t][s], thermal_out[t][s]]);
            e.push(q_miss[t][s], 1.0);
            m.add_constraint(format!("heat_{ts_}"), e, Sense::Eq, sc.demand[t])?;
        }
        m.add_constraint(
            format!("tend_s{}", s + 1),
            LinExpr::term(thermal[last][s], 1.0),
            Sense::Eq,
            state.thermal_level,
        )?;
    }

    let mut obj = LinExpr::constant(contract_constant);
    for s in 0..n_s {
        let p = probs[s];
        let sc = &scenarios.scenarios()[s];
        let costs = derive_cost_series(&sc.elec_price, &sc.fuel_price, pc, &plant.aux)?;
        for t in 0..n_t {
            for (k, &j) in active.iter().enumerate() {
                let base = contracts[j].base_price;
                obj.push(used_up[k][t][s], p * base)
                    .push(used_down[k][t][s], -p * base);
            }
            let q_op = -p * pc.chp_op * chp.theta;
            obj.push(power[t][s], p * (pc.chp_op + costs.net_elec[t]))
                .push(q_chp_net[t][s], q_op)
                .push(q_chp_sto[t][s], q_op)
                .push(start[t][s], p * pc.startup)
                .push(stop[t][s], p * pc.shutdown)
                .push(q_aux_net[t][s], p * costs.aux[t] / plant.aux.eff)
                .push(q_aux_sto[t][s], p * costs.aux[t] / plant.aux.eff)
                .push(level[t][s], p * bs.inventory_cost)
                .push(excess[t][s], p * pc.penalty_store)
                .push(q_miss[t][s], p * pc.penalty_miss)
                .push(emergency[t][s], p * pc.penalty_miss);
            if let Some(sf) = shortfall[t][s] {
                obj.push(sf, p * pc.penalty_store);
            }
        }
    }
    m.set_objective(obj)?;

    Ok(OperationalModel {
        model: m,
        state: state.clone(),
        index: OperationalIndex {
            start_week,
            n_weeks: n_w,
            periods_per_week: ppw,
            n_periods: n_t,
            n_scenarios: n_s,
            contracts: active,
            delivery,
            amount,
            used_up,
            used_down,
            level,
            outflow,
            excess,
            shortfall,
            emergency,
            on,
            start,
            stop,
            power,
            q_chp_net,
            q_chp_sto,
            q_aux_net,
            q_aux_sto,
            thermal,
            thermal_out,
            q_miss,
            contract_constant,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Scenario, TimeGrid};
    use crate::phase1::WeekPlan;
    use crate::synthetic::{toy_contracts, toy_plant};

    pub(crate) fn one_contract_plan(weeks: usize) -> (Vec<ContractSpec>, ContractPlan) {
        let contracts = vec![toy_contracts().remove(0)];
        let mut plan = ContractPlan::empty(&contracts, weeks);
        plan.selected[0] = true;
        for w in 0..weeks {
            plan.weeks[0][w] = WeekPlan {
                deliveries: 1,
                amount: 100.0,
                up: 10.0,
                down: 0.0,
            };
        }
        (contracts, plan)
    }

    fn hourly_set(weeks: usize, n: usize) -> ScenarioSet {
        let len = weeks * 168;
        let scenarios = (0..n)
            .map(|s| Scenario {
                probability: 1.0 / n as f64,
                demand: vec![2.0 + s as f64 * 0.1; len],
                elec_price: vec![40.0; len],
                fuel_price: vec![20.0; len],
            })
            .collect();
        ScenarioSet::new(TimeGrid::hourly(weeks), scenarios).unwrap()
    }

    #[test]
    fn integer_counts_match_closed_form() {
        let plant = toy_plant(4);
        let (contracts, plan) = one_contract_plan(4);
        let state = SystemState::initial(&plant);
        for (w, expect) in [(1, 3360), (2, 6720)] {
            let om =
                build_operational_model(&plant, &contracts, &plan, 0, &hourly_set(w, 5), &state)
                    .unwrap();
            assert_eq!(om.model.n_integer_vars(), 3 * 168 * w * 5 + 168 * w * 5);
            assert_eq!(om.model.n_integer_vars(), expect);
        }
    }

    #[test]
    fn idle_contracts_are_pruned() {
        let plant = toy_plant(4);
        let (contracts, mut plan) = one_contract_plan(4);
        plan.weeks[0][1] = WeekPlan::default();
        let state = SystemState::initial(&plant);
        let om = build_operational_model(&plant, &contracts, &plan, 1, &hourly_set(1, 1), &state)
            .unwrap();
        assert!(om.index.contracts.is_empty());
        assert_eq!(om.model.n_integer_vars(), 3 * 168);
        let om = build_operational_model(&plant, &contracts, &plan, 0, &hourly_set(2, 1), &state)
            .unwrap();
        assert_eq!(om.index.contracts, vec![0]);
        assert!((om.index.contract_constant - 181.31 * 100.0 - 30.56 * 10.0).abs() < 1e-9);
    }

    #[test]
    fn window_beyond_plan_is_rejected() {
        let plant = toy_plant(4);
        let (contracts, plan) = one_contract_plan(4);
        let state = SystemState::initial(&plant);
        let err = build_operational_model(&plant, &contracts, &plan, 3, &hourly_set(2, 1), &state);
        assert!(matches!(err, Err(Phase2Error::MissingPlanWeek(_))));
    }

    #[test]
    fn weekly_grid_is_rejected() {
        let plant = toy_plant(4);
        let (contracts, plan) = one_contract_plan(4);
        let set = crate::synthetic::toy_weekly_scenarios();
        let err = build_operational_model(
            &plant,
            &contracts,
            &plan,
            0,
            &set,
            &SystemState::initial(&plant),
        );
        assert!(matches!(err, Err(Phase2Error::Grid(_))));
    }

    #[test]
    fn residual_minimum_up_time_is_fixed() {
        let mut plant = toy_plant(4);
        plant.chp.min_up = 4;
        let (contracts, plan) = one_contract_plan(4);
        let state = SystemState {
            chp_on: true,
            chp_power: 1.0,
            hours_in_state: 1,
            ..SystemState::initial(&plant)
        };
        let om = build_operational_model(&plant, &contracts, &plan, 0, &hourly_set(1, 2), &state)
            .unwrap();
        for t in 0..3 {
            for s in 0..2 {
                let v = om.model.var(om.index.on[t][s]);
                assert_eq!((v.lb, v.ub), (1.0, 1.0));
            }
        }
        let v = om.model.var(om.index.on[3][0]);
        assert_eq!((v.lb, v.ub), (0.0, 1.0));
    }

    #[test]
    fn names_follow_the_grammar() {
        let plant = toy_plant(4);
        let (contracts, plan) = one_contract_plan(4);
        let om = build_operational_model(
            &plant,
            &contracts,
            &plan,
            0,
            &hourly_set(1, 2),
            &SystemState::initial(&plant),
        )
        .unwrap();
        for name in [
            "p_t1_s1",
            "p_t168_s2",
            "dh_j1_t5_s2",
            "x_t3_s1",
            "qmiss_t10_s2",
        ] {
            assert!(om.model.var_id(name).is_some(), "{name}");
        }
        assert!(om.model.var_id("lsf_t1_s1").is_none());
        assert!(om.model.constraint("tend_s2").is_some());
        assert!(om.model.constraint("na_dh_j1_t168_s2").is_some());
        assert!(om.model.constraint("na_dh_j1_t169_s2").is_none());
    }
}
