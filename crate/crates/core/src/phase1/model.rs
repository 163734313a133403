use super::{ContractPlan, Phase1Error, Result, WeekPlan};
use crate::domain::{
    derive_cost_series, ContractSpec, PlantConfig, Resolution, ScenarioSet, HOURS_PER_WEEK,
};
use crate::milp::{Assignment, LinExpr, Model, Sense, VarId, VarKind};

/// Expected weekly prices: mean electricity price and mean fuel price.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeklyPrices {
    pub elec: Vec<f64>,
    pub fuel: Vec<f64>,
}

impl WeeklyPrices {
    /// Probability-weighted means of the set's price series.
    pub fn expected(set: &ScenarioSet) -> Self {
        let ev = set.expectation();
        let s = &ev.scenarios()[0];
        WeeklyPrices {
            elec: s.elec_price.clone(),
            fuel: s.fuel_price.clone(),
        }
    }
}

/// Model options beyond the plant data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractModelOptions {
    /// Caps the deliveries of all contracts per week at what the
    /// operational model can space `delivery_gap` hours apart.
    pub weekly_delivery_cap: bool,
}

impl Default for ContractModelOptions {
    fn default() -> Self {
        ContractModelOptions {
            weekly_delivery_cap: true,
        }
    }
}

/// Column handles of the contract-selection model.
#[derive(Debug, Clone)]
pub struct ContractIndex {
    pub n_contracts: usize,
    pub n_weeks: usize,
    pub n_scenarios: usize,
    pub contract_ids: Vec<String>,
    pub u: Vec<VarId>,
    /// `[j][t]`
    pub d: Vec<Vec<VarId>>,
    pub b: Vec<Vec<VarId>>,
    pub b_up: Vec<Vec<VarId>>,
    pub b_down: Vec<Vec<VarId>>,
    /// `[j][t][s]`
    pub used_up: Vec<Vec<Vec<VarId>>>,
    pub used_down: Vec<Vec<Vec<VarId>>>,
    /// `[t][s]`
    pub level: Vec<Vec<VarId>>,
    pub inflow: Vec<Vec<VarId>>,
    pub outflow: Vec<Vec<VarId>>,
    pub power: Vec<Vec<VarId>>,
    pub q_chp: Vec<Vec<VarId>>,
    pub q_aux: Vec<Vec<VarId>>,
    pub q_miss: Vec<Vec<VarId>>,
    pub q_bm: Vec<Vec<VarId>>,
    /// `[s]`
    pub end_excess: Vec<VarId>,
}

/// The contract-selection MILP with its index.
#[derive(Debug, Clone)]
pub struct ContractModel {
    pub model: Model,
    pub index: ContractIndex,
}

/// Number of weeks a delivery of contract `c` blocks and the deliveries
/// allowed within that window.
pub fn frequency_window(c: &ContractSpec) -> (usize, u32) {
    let weeks = (c.freq as usize / HOURS_PER_WEEK).max(1);
    let per = (HOURS_PER_WEEK as u32 / c.freq).max(1);
    (weeks, per)
}

/// Most deliveries per week that fit with `gap` hours between any two,
/// repeated week after week.
pub fn max_weekly_deliveries(gap: u32) -> usize {
    (HOURS_PER_WEEK / (gap as usize + 1)).max(1)
}

/// Builds the weekly two-stage contract-selection model.
///
/// `scenarios` must be weekly; only their demand is used. Prices come from
/// `prices`, the option incentive from `psi`.
pub fn build_contract_model(
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    scenarios: &ScenarioSet,
    prices: &WeeklyPrices,
    psi: &[f64],
    options: ContractModelOptions,
) -> Result<ContractModel> {
    let grid = scenarios.grid();
    if grid.resolution() != Resolution::Weekly {
        return Err(Phase1Error::Grid(
            "contract selection needs weekly scenarios".into(),
        ));
    }
    let n_t = grid.n_periods();
    for (what, len) in [
        ("psi", psi.len()),
        ("electricity price", prices.elec.len()),
        ("fuel price", prices.fuel.len()),
    ] {
        if len != n_t {
            return Err(Phase1Error::Grid(format!(
                "{what} has {len} weeks, scenarios have {n_t}"
            )));
        }
    }
    let costs = derive_cost_series(&prices.elec, &prices.fuel, &plant.costs, &plant.aux)?;

    let h = HOURS_PER_WEEK as f64;
    let chp = &plant.chp;
    let bs = &plant.biomass_storage;
    let pc = &plant.costs;
    let n_j = contracts.len();
    let n_s = scenarios.len();
    let probs = scenarios.probabilities();
    let inf = f64::INFINITY;

    let mut m = Model::new("contract_selection");
    let mut u = Vec::with_capacity(n_j);
    let (mut d, mut b, mut b_up, mut b_down) = (vec![], vec![], vec![], vec![]);
    for (j, c) in contracts.iter().enumerate() {
        let jj = j + 1;
        u.push(m.binary(format!("u_j{jj}"))?);
        let mut row = |sym: &str, kind, ub| -> Result<Vec<VarId>> {
            (0..n_t)
                .map(|t| Ok(m.add_var(format!("{sym}_j{jj}_w{}", t + 1), kind, 0.0, ub)?))
                .collect()
        };
        d.push(row("d", VarKind::Integer, c.deliveries_max as f64)?);
        b.push(row("b", VarKind::Continuous, inf)?);
        let up_ub = if c.opt_up > 0.0 { inf } else { 0.0 };
        let down_ub = if c.opt_down > 0.0 { inf } else { 0.0 };
        b_up.push(row("bp", VarKind::Continuous, up_ub)?);
        b_down.push(row("bm", VarKind::Continuous, down_ub)?);
    }

    let mut used_up = vec![vec![Vec::with_capacity(n_s); n_t]; n_j];
    let mut used_down = vec![vec![Vec::with_capacity(n_s); n_t]; n_j];
    for j in 0..n_j {
        for t in 0..n_t {
            for s in 0..n_s {
                let tag = format!("j{}_w{}_s{}", j + 1, t + 1, s + 1);
                used_up[j][t].push(m.cont(format!("bpu_{tag}"))?);
                used_down[j][t].push(m.cont(format!("bmu_{tag}"))?);
            }
        }
    }

    let per_ts = |m: &mut Model, sym: &str| -> Result<Vec<Vec<VarId>>> {
        (0..n_t)
            .map(|t| {
                (0..n_s)
                    .map(|s| Ok(m.cont(format!("{sym}_w{}_s{}", t + 1, s + 1))?))
                    .collect()
            })
            .collect()
    };
    let level = per_ts(&mut m, "lvl")?;
    let inflow = per_ts(&mut m, "lin")?;
    let outflow = per_ts(&mut m, "lout")?;
    let power = per_ts(&mut m, "p")?;
    let q_chp = per_ts(&mut m, "qchp")?;
    let q_aux = per_ts(&mut m, "qaux")?;
    let q_miss = per_ts(&mut m, "qmiss")?;
    let q_bm = per_ts(&mut m, "qbm")?;
    let end_excess: Vec<VarId> = (0..n_s)
        .map(|s| Ok(m.cont(format!("lend_s{}", s + 1))?))
        .collect::<Result<_>>()?;

    // contract activation and frequency
    for (j, c) in contracts.iter().enumerate() {
        let jj = j + 1;
        let total = LinExpr::sum(d[j].iter().copied());
        m.add_constraint(
            format!("nmin_j{jj}"),
            total.clone() - LinExpr::term(u[j], c.deliveries_min as f64),
            Sense::Ge,
            0.0,
        )?;
        m.add_constraint(
            format!("nmax_j{jj}"),
            total - LinExpr::term(u[j], c.deliveries_max as f64),
            Sense::Le,
            0.0,
        )?;
        let (win, per) = frequency_window(c);
        for t in 0..n_t {
            let lo = (t + 1).saturating_sub(win);
            // windows cut by the horizon start are implied by later full ones
            if win > 1 && t + 1 < win && t + 1 < n_t {
                continue;
            }
            m.add_constraint(
                format!("freq_j{jj}_w{}", t + 1),
                LinExpr::sum(d[j][lo..=t].iter().copied()),
                Sense::Le,
                per as f64,
            )?;
        }
        for t in 0..n_t {
            let tag = format!("j{jj}_w{}", t + 1);
            let mut e = LinExpr::term(b[j][t], 1.0);
            e.push(b_up[j][t], 1.0).push(d[j][t], -c.amount_max);
            m.add_constraint(format!("bmax_{tag}"), e, Sense::Le, 0.0)?;
            let mut e = LinExpr::term(b[j][t], 1.0);
            e.push(b_down[j][t], -1.0).push(d[j][t], -c.amount_min);
            m.add_constraint(format!("bmin_{tag}"), e, Sense::Ge, 0.0)?;
            if c.opt_up > 0.0 {
                let mut e = LinExpr::term(b_up[j][t], 1.0);
                e.push(b[j][t], -c.opt_up);
                m.add_constraint(format!("oup_{tag}"), e, Sense::Le, 0.0)?;
            }
            if c.opt_down > 0.0 {
                let mut e = LinExpr::term(b_down[j][t], 1.0);
                e.push(b[j][t], -c.opt_down);
                m.add_constraint(format!("odn_{tag}"), e, Sense::Le, 0.0)?;
            }
            for s in 0..n_s {
                let st = format!("{tag}_s{}", s + 1);
                let mut e = LinExpr::term(used_up[j][t][s], 1.0);
                e.push(b_up[j][t], -1.0);
                m.add_constraint(format!("uup_{st}"), e, Sense::Le, 0.0)?;
                let mut e = LinExpr::term(used_down[j][t][s], 1.0);
                e.push(b_down[j][t], -1.0);
                m.add_constraint(format!("udn_{st}"), e, Sense::Le, 0.0)?;
            }
        }
    }
    if options.weekly_delivery_cap && n_j > 0 {
        let cap = max_weekly_deliveries(bs.delivery_gap);
        for t in 0..n_t {
            m.add_constraint(
                format!("dcap_w{}", t + 1),
                LinExpr::sum((0..n_j).map(|j| d[j][t])),
                Sense::Le,
                cap as f64,
            )?;
        }
    }

    for s in 0..n_s {
        let demand = &scenarios.scenarios()[s].demand;
        for t in 0..n_t {
            let tag = format!("w{}_s{}", t + 1, s + 1);
            let week = t + 1;
            m.set_bounds(level[t][s], bs.safety.at_week(week), bs.cap)?;
            m.set_bounds(outflow[t][s], 0.0, h * bs.max_outflow)?;
            m.set_bounds(q_aux[t][s], 0.0, h * plant.aux.q_max)?;
            m.set_bounds(q_chp[t][s], 0.0, h * chp.q_max)?;

            let mut e = LinExpr::term(level[t][s], 1.0);
            e.push(inflow[t][s], -1.0).push(outflow[t][s], 1.0);
            let prev = if t == 0 {
                bs.initial
            } else {
                e.push(level[t - 1][s], -1.0);
                0.0
            };
            m.add_constraint(format!("lbal_{tag}"), e, Sense::Eq, prev)?;

            let mut e = LinExpr::term(inflow[t][s], 1.0);
            for j in 0..n_j {
                e.push(b[j][t], -bs.calorific)
                    .push(used_up[j][t][s], -bs.calorific)
                    .push(used_down[j][t][s], bs.calorific);
            }
            m.add_constraint(format!("lin_{tag}"), e, Sense::Eq, 0.0)?;

            let mut e = LinExpr::term(outflow[t][s], 1.0);
            e.push(power[t][s], -1.0 / chp.eff_power)
                .push(q_chp[t][s], chp.theta / chp.eff_heat);
            m.add_constraint(format!("cons_{tag}"), e, Sense::Eq, 0.0)?;

            let mut e = LinExpr::term(power[t][s], 1.0);
            e.push(q_chp[t][s], -chp.theta);
            m.add_constraint(format!("pmin_{tag}"), e.clone(), Sense::Ge, 0.0)?;
            m.add_constraint(format!("pmax_{tag}"), e, Sense::Le, h * chp.p_max)?;
            let mut e = LinExpr::term(q_chp[t][s], chp.xi);
            e.push(power[t][s], -1.0);
            m.add_constraint(format!("bp_{tag}"), e, Sense::Le, 0.0)?;

            let mut e = LinExpr::term(q_chp[t][s], 1.0);
            e.push(q_aux[t][s], 1.0).push(q_miss[t][s], 1.0);
            m.add_constraint(format!("heat_{tag}"), e, Sense::Eq, demand[t])?;
            let mut e = LinExpr::term(q_chp[t][s], 1.0);
            e.push(q_bm[t][s], 1.0);
            m.add_constraint(
                format!("share_{tag}"),
                e,
                Sense::Ge,
                pc.biomass_share_target * demand[t],
            )?;
        }
        let mut e = LinExpr::term(level[n_t - 1][s], 1.0);
        e.push(end_excess[s], -1.0);
        m.add_constraint(format!("lend_s{}", s + 1), e, Sense::Le, bs.initial)?;
    }

    let mut obj = LinExpr::new();
    for (j, c) in contracts.iter().enumerate() {
        for t in 0..n_t {
            obj.push(b[j][t], c.base_price)
                .push(b_up[j][t], c.up_price - psi[t])
                .push(b_down[j][t], c.down_price - psi[t]);
            for s in 0..n_s {
                obj.push(used_up[j][t][s], probs[s] * c.base_price)
                    .push(used_down[j][t][s], -probs[s] * c.base_price);
            }
        }
    }
    for s in 0..n_s {
        let p = probs[s];
        for t in 0..n_t {
            obj.push(power[t][s], p * (pc.chp_op + costs.net_elec[t]))
                .push(q_chp[t][s], -p * pc.chp_op * chp.theta)
                .push(q_aux[t][s], p * costs.aux[t] / plant.aux.eff)
                .push(level[t][s], p * bs.inventory_cost)
                .push(q_miss[t][s], p * pc.penalty_miss)
                .push(q_bm[t][s], p * pc.penalty_bm);
        }
        obj.push(end_excess[s], p * pc.penalty_store);
    }
    m.set_objective(obj)?;

    Ok(ContractModel {
        model: m,
        index: ContractIndex {
            n_contracts: n_j,
            n_weeks: n_t,
            n_scenarios: n_s,
            contract_ids: contracts.iter().map(|c| c.id.clone()).collect(),
            u,
            d,
            b,
            b_up,
            b_down,
            used_up,
            used_down,
            level,
            inflow,
            outflow,
            power,
            q_chp,
            q_aux,
            q_miss,
            q_bm,
            end_excess,
        },
    })
}

const INT_TOL: f64 = 1e-6;

fn integral(model: &Model, a: &Assignment, v: VarId) -> Result<f64> {
    let x = a.value(v);
    let r = x.round();
    if (x - r).abs() > INT_TOL {
        return Err(Phase1Error::Integrality {
            name: model.var(v).name.clone(),
            value: x,
        });
    }
    Ok(r)
}

fn nonneg(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

/// Reads the first-stage decisions and re-checks them against the terms.
pub fn extract_contract_plan(
    cm: &ContractModel,
    contracts: &[ContractSpec],
    a: &Assignment,
) -> Result<ContractPlan> {
    if !a.status.has_solution() {
        return Err(Phase1Error::NoSolution(format!("{:?}", a.status)));
    }
    let ix = &cm.index;
    let mut plan = ContractPlan::empty(contracts, ix.n_weeks);
    for j in 0..ix.n_contracts {
        plan.selected[j] = integral(&cm.model, a, ix.u[j])? == 1.0;
        for t in 0..ix.n_weeks {
            plan.weeks[j][t] = WeekPlan {
                deliveries: integral(&cm.model, a, ix.d[j][t])? as u32,
                amount: nonneg(a.value(ix.b[j][t])),
                up: nonneg(a.value(ix.b_up[j][t])),
                down: nonneg(a.value(ix.b_down[j][t])),
            };
        }
    }
    plan.validate(contracts)?;
    Ok(plan)
}

/// Pins every first-stage column to `plan`.
pub fn fix_first_stage(cm: &mut ContractModel, plan: &ContractPlan) -> Result<()> {
    let ix = &cm.index;
    if plan.n_contracts() != ix.n_contracts || plan.n_weeks() != ix.n_weeks {
        return Err(Phase1Error::Plan(
            "plan shape does not match the model".into(),
        ));
    }
    for j in 0..ix.n_contracts {
        cm.model
            .fix(ix.u[j], if plan.selected[j] { 1.0 } else { 0.0 })?;
        for t in 0..ix.n_weeks {
            let r = plan.week(j, t);
            cm.model.fix(ix.d[j][t], r.deliveries as f64)?;
            cm.model.fix(ix.b[j][t], r.amount)?;
            cm.model.fix(ix.b_up[j][t], r.up)?;
            cm.model.fix(ix.b_down[j][t], r.down)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{toy_contracts, toy_plant, toy_weekly_scenarios};

    fn toy_model() -> ContractModel {
        let set = toy_weekly_scenarios();
        let prices = WeeklyPrices::expected(&set);
        build_contract_model(
            &toy_plant(4),
            &toy_contracts(),
            &set,
            &prices,
            &[1.0; 4],
            ContractModelOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn variable_count_matches_closed_form() {
        // first stage 2 + 4·2·4, recourse 2·2·4·2 + 3·4·2 + 5·4·2 + 2
        let m = toy_model();
        assert_eq!(
            m.model.n_vars(),
            (2 + 4 * 2 * 4) + (2 * 2 * 4 * 2 + 3 * 4 * 2 + 5 * 4 * 2 + 2)
        );
        assert_eq!(m.model.n_vars(), 132);
        assert_eq!(m.model.n_binary_vars(), 2);
        assert_eq!(m.model.n_integer_vars(), 2 + 8);
    }

    #[test]
    fn rejects_hourly_scenarios() {
        let set = crate::synthetic::toy_hourly_scenario();
        let prices = WeeklyPrices {
            elec: vec![40.0; 6],
            fuel: vec![20.0; 6],
        };
        let err = build_contract_model(
            &toy_plant(1),
            &toy_contracts(),
            &set,
            &prices,
            &[0.0; 6],
            ContractModelOptions::default(),
        );
        assert!(matches!(err, Err(Phase1Error::Grid(_))));
    }

    #[test]
    fn frequency_windows() {
        let mut c = toy_contracts().remove(0);
        c.freq = 2016;
        assert_eq!(frequency_window(&c), (12, 1));
        c.freq = 84;
        assert_eq!(frequency_window(&c), (1, 2));
        c.freq = 168;
        assert_eq!(frequency_window(&c), (1, 1));
        assert_eq!(max_weekly_deliveries(24), 6);
        assert_eq!(max_weekly_deliveries(0), 168);
    }

    #[test]
    fn extraction_maps_first_stage_values() {
        use crate::milp::SolveStatus;
        let m = toy_model();
        let contracts = toy_contracts();
        let mut values = vec![0.0; m.model.n_vars()];
        values[m.index.u[0].index()] = 1.0;
        values[m.index.d[0][2].index()] = 1.0;
        values[m.index.b[0][2].index()] = 100.0;
        let a = Assignment {
            values: values.clone(),
            objective: None,
            status: SolveStatus::Optimal,
            gap: None,
            missing: vec![],
            diagnostics: String::new(),
        };
        let plan = extract_contract_plan(&m, &contracts, &a).unwrap();
        assert!(plan.selected[0] && !plan.selected[1]);
        assert_eq!(plan.week(0, 2).deliveries, 1);
        assert_eq!(plan.week(0, 2).amount, 100.0);

        // amount without the contract being selected
        values[m.index.u[0].index()] = 0.0;
        let bad = Assignment { values, ..a };
        assert!(extract_contract_plan(&m, &contracts, &bad).is_err());
    }

    #[test]
    fn fractional_delivery_is_rejected() {
        use crate::milp::SolveStatus;
        let m = toy_model();
        let mut values = vec![0.0; m.model.n_vars()];
        values[m.index.d[1][0].index()] = 0.5;
        let a = Assignment {
            values,
            objective: None,
            status: SolveStatus::Optimal,
            gap: None,
            missing: vec![],
            diagnostics: String::new(),
        };
        assert!(matches!(
            extract_contract_plan(&m, &toy_contracts(), &a),
            Err(Phase1Error::Integrality { .. })
        ));
    }
}
