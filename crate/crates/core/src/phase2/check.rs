use super::OperationalModel;
use crate::domain::{ContractSpec, PlantConfig, ScenarioSet};
use crate::milp::Assignment;

/// Re-checks commitment logic, minimum up/down times, ramping, delivery
/// spacing, non-anticipativity, both storage recursions, thermal closure
/// and the heat balance by a linear pass over the solution values.
/// Returns one message per failed check.
pub fn scan_operational_solution(
    om: &OperationalModel,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    scenarios: &ScenarioSet,
    a: &Assignment,
    tol: f64,
) -> Vec<String> {
    let ix = &om.index;
    let st = &om.state;
    let chp = &plant.chp;
    let bs = &plant.biomass_storage;
    let v = |id| a.value(id);
    let close = |x: f64, y: f64| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()));
    let mut out = Vec::new();
    let n_t = ix.n_periods;

    for s in 0..ix.n_scenarios {
        let sn = s + 1;
        let bin = |id| v(id) > 0.5;
        let x: Vec<bool> = (0..n_t).map(|t| bin(ix.on[t][s])).collect();
        let y: Vec<bool> = (0..n_t).map(|t| bin(ix.start[t][s])).collect();
        let z: Vec<bool> = (0..n_t).map(|t| bin(ix.stop[t][s])).collect();
        for t in 0..n_t {
            for id in [ix.on[t][s], ix.start[t][s], ix.stop[t][s]] {
                let r = v(id);
                if (r - r.round()).abs() > tol {
                    out.push(format!("{} = {r} is fractional", om.model.var(id).name));
                }
            }
        }

        // commitment and minimum up/down times
        let mut prev = st.chp_on;
        for t in 0..n_t {
            let lhs = i32::from(y[t]) - i32::from(z[t]);
            let rhs = i32::from(x[t]) - i32::from(prev);
            if lhs != rhs || (y[t] && z[t]) {
                out.push(format!("status logic t{} s{sn}", t + 1));
            }
            prev = x[t];
        }
        let h0 = st.hours_in_state as usize;
        let (must, hold) = if st.chp_on {
            (chp.min_up as usize, true)
        } else {
            (chp.min_down as usize, false)
        };
        for t in 0..must.saturating_sub(h0).min(n_t) {
            if x[t] != hold {
                out.push(format!(
                    "carried-over minimum time broken at t{} s{sn}",
                    t + 1
                ));
            }
        }
        for t in 0..n_t {
            if y[t]
                && x[t..(t + chp.min_up as usize).min(n_t)]
                    .iter()
                    .any(|&on| !on)
            {
                out.push(format!("minimum up time after start at t{} s{sn}", t + 1));
            }
            if z[t]
                && x[t..(t + chp.min_down as usize).min(n_t)]
                    .iter()
                    .any(|&on| on)
            {
                out.push(format!("minimum down time after stop at t{} s{sn}", t + 1));
            }
        }

        // ramping
        let (mut p_prev, mut x_prev) = (st.chp_power, st.chp_on);
        for t in 0..n_t {
            let p = v(ix.power[t][s]);
            let f = |b: bool| if b { 1.0 } else { 0.0 };
            let up = chp.ramp_up * f(x_prev) + chp.p_min * f(y[t]);
            let dn = chp.ramp_down * f(x[t]) + chp.p_min * f(z[t]);
            if p - p_prev > up + tol || p_prev - p > dn + tol {
                out.push(format!("ramp t{} s{sn}: {p_prev} -> {p}", t + 1));
            }
            (p_prev, x_prev) = (p, x[t]);
        }

        // deliveries: spacing across contracts and per-contract frequency
        let mut hours: Vec<(usize, usize)> = Vec::new();
        for (k, &j) in ix.contracts.iter().enumerate() {
            let mine: Vec<usize> = (0..n_t).filter(|&t| bin(ix.delivery[k][t][s])).collect();
            for w in mine.windows(2) {
                if w[1] - w[0] <= contracts[j].freq as usize {
                    out.push(format!("contract {} frequency s{sn}", contracts[j].id));
                }
            }
            hours.extend(mine.into_iter().map(|t| (t, k)));
        }
        hours.sort_unstable();
        for w in hours.windows(2) {
            if w[1].0 - w[0].0 <= bs.delivery_gap as usize {
                out.push(format!(
                    "deliveries at t{} and t{} s{sn} too close",
                    w[0].0 + 1,
                    w[1].0 + 1
                ));
            }
        }

        // biomass storage
        let mut lvl_prev = st.biomass_level;
        for t in 0..n_t {
            let mut inflow = v(ix.emergency[t][s]);
            for k in 0..ix.contracts.len() {
                inflow += bs.calorific
                    * (v(ix.amount[k][t][s]) + v(ix.used_up[k][t][s]) - v(ix.used_down[k][t][s]));
            }
            let lvl = v(ix.level[t][s]);
            if !close(lvl, lvl_prev + inflow - v(ix.outflow[t][s])) {
                out.push(format!("biomass recursion t{} s{sn}", t + 1));
            }
            if lvl < -tol {
                out.push(format!("negative biomass level t{} s{sn}", t + 1));
            }
            let q = v(ix.q_chp_net[t][s]) + v(ix.q_chp_sto[t][s]);
            let burn = v(ix.power[t][s]) / chp.eff_power - chp.theta * q / chp.eff_heat;
            if !close(v(ix.outflow[t][s]), burn) {
                out.push(format!("biomass consumption t{} s{sn}", t + 1));
            }
            lvl_prev = lvl;
        }

        // thermal storage and heat balance
        let demand = &scenarios.scenarios()[s].demand;
        let mut th_prev = st.thermal_level;
        for t in 0..n_t {
            let th = v(ix.thermal[t][s]);
            let sin = v(ix.q_chp_sto[t][s]) + v(ix.q_aux_sto[t][s]);
            let sout = v(ix.thermal_out[t][s]);
            if !close(th, th_prev + sin - sout) {
                out.push(format!("thermal recursion t{} s{sn}", t + 1));
            }
            if sout > th_prev + tol {
                out.push(format!(
                    "thermal outflow above previous level t{} s{sn}",
                    t + 1
                ));
            }
            let heat = v(ix.q_chp_net[t][s]) + v(ix.q_aux_net[t][s]) + sout + v(ix.q_miss[t][s]);
            if !close(heat, demand[t]) {
                out.push(format!(
                    "heat balance t{} s{sn}: {heat} != {}",
                    t + 1,
                    demand[t]
                ));
            }
            th_prev = th;
        }
        if !close(th_prev, st.thermal_level) {
            out.push(format!(
                "thermal cycle not closed s{sn}: {th_prev} != {}",
                st.thermal_level
            ));
        }
    }

    // non-anticipativity
    for k in 0..ix.contracts.len() {
        for t in ix.first_week() {
            for fam in [&ix.delivery, &ix.amount, &ix.used_up, &ix.used_down] {
                let first = v(fam[k][t][0]);
                for s in 1..ix.n_scenarios {
                    if !close(first, v(fam[k][t][s])) {
                        out.push(format!(
                            "{} differs in s{}",
                            om.model.var(fam[k][t][0]).name,
                            s + 1
                        ));
                    }
                }
            }
        }
    }
    out
}
