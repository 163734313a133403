use super::ContractModel;
use crate::domain::{PlantConfig, ScenarioSet};
use crate::milp::Assignment;

/// Re-checks the structural properties of a contract-selection solution
/// directly from its values. Returns one message per failed check.
pub fn scan_contract_solution(
    cm: &ContractModel,
    plant: &PlantConfig,
    scenarios: &ScenarioSet,
    a: &Assignment,
    tol: f64,
) -> Vec<String> {
    let ix = &cm.index;
    let bs = &plant.biomass_storage;
    let v = |id| a.value(id);
    let mut out = Vec::new();
    for s in 0..ix.n_scenarios {
        let demand = &scenarios.scenarios()[s].demand;
        let mut prev = bs.initial;
        for t in 0..ix.n_weeks {
            let (w, sn) = (t + 1, s + 1);
            let lvl = v(ix.level[t][s]);
            let step = prev + v(ix.inflow[t][s]) - v(ix.outflow[t][s]);
            if (lvl - step).abs() > tol * (1.0 + lvl.abs()) {
                out.push(format!("storage recursion w{w} s{sn}: {lvl} != {step}"));
            }
            let floor = bs.safety.at_week(w);
            if lvl < floor - tol || lvl > bs.cap + tol {
                out.push(format!(
                    "storage level w{w} s{sn}: {lvl} outside [{floor}, {}]",
                    bs.cap
                ));
            }
            let heat = v(ix.q_chp[t][s]) + v(ix.q_aux[t][s]) + v(ix.q_miss[t][s]);
            if (heat - demand[t]).abs() > tol * (1.0 + demand[t].abs()) {
                out.push(format!("heat balance w{w} s{sn}: {heat} != {}", demand[t]));
            }
            for j in 0..ix.n_contracts {
                if v(ix.used_up[j][t][s]) > v(ix.b_up[j][t]) + tol
                    || v(ix.used_down[j][t][s]) > v(ix.b_down[j][t]) + tol
                {
                    out.push(format!("option usage above purchase j{} w{w} s{sn}", j + 1));
                }
            }
            prev = lvl;
        }
    }
    out
}
