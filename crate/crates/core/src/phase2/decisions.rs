use serde::{Deserialize, Serialize};

use super::{OperationalModel, Phase2Error, Result};
use crate::domain::ContractSpec;
use crate::milp::Assignment;
use crate::phase1::ContractPlan;

/// First-week delivery schedule, `[k][t]` with `k` indexing `contracts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekDecisions {
    /// Plan week (0-based) the decisions belong to.
    pub week: usize,
    /// Plan indices of the contracts.
    pub contracts: Vec<usize>,
    pub periods: usize,
    pub delivery: Vec<Vec<bool>>,
    /// Tonnes.
    pub amount: Vec<Vec<f64>>,
    pub used_up: Vec<Vec<f64>>,
    pub used_down: Vec<Vec<f64>>,
}

const TOL: f64 = 1e-6;

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

/// Reads the first-week deliveries, checking that every scenario agrees.
pub fn extract_week_decisions(om: &OperationalModel, a: &Assignment) -> Result<WeekDecisions> {
    if !a.status.has_solution() {
        return Err(Phase2Error::NoSolution(format!("{:?}", a.status)));
    }
    let ix = &om.index;
    let n_k = ix.contracts.len();
    let ppw = ix.periods_per_week;
    let mut d = WeekDecisions {
        week: ix.start_week,
        contracts: ix.contracts.clone(),
        periods: ppw,
        delivery: vec![vec![false; ppw]; n_k],
        amount: vec![vec![0.0; ppw]; n_k],
        used_up: vec![vec![0.0; ppw]; n_k],
        used_down: vec![vec![0.0; ppw]; n_k],
    };
    for k in 0..n_k {
        for t in 0..ppw {
            for (family, out) in [
                (&ix.delivery, None),
                (&ix.amount, Some(&mut d.amount)),
                (&ix.used_up, Some(&mut d.used_up)),
                (&ix.used_down, Some(&mut d.used_down)),
            ] {
                let first = a.value(family[k][t][0]);
                for s in 1..ix.n_scenarios {
                    let other = a.value(family[k][t][s]);
                    if (other - first).abs() > TOL * (1.0 + first.abs()) {
                        return Err(Phase2Error::Anticipative {
                            name: om.model.var(family[k][t][0]).name.clone(),
                            scenario: s + 1,
                            a: first,
                            b: other,
                        });
                    }
                }
                match out {
                    Some(o) => o[k][t] = clean(first),
                    None => {
                        let r = first.round();
                        if (first - r).abs() > TOL || !(r == 0.0 || r == 1.0) {
                            return Err(Phase2Error::Integrality {
                                name: om.model.var(family[k][t][0]).name.clone(),
                                value: first,
                            });
                        }
                        d.delivery[k][t] = r == 1.0;
                    }
                }
            }
        }
    }
    Ok(d)
}

impl WeekDecisions {
    /// Checks spacing, contract amount limits and consistency with the
    /// plan row of `self.week`.
    pub fn validate(
        &self,
        contracts: &[ContractSpec],
        plan: &ContractPlan,
        delivery_gap: u32,
    ) -> Result<()> {
        let bad = |msg: String| Err(Phase2Error::Decisions(msg));
        let mut hours: Vec<usize> = self
            .delivery
            .iter()
            .flat_map(|row| row.iter().enumerate().filter(|(_, &f)| f).map(|(t, _)| t))
            .collect();
        hours.sort_unstable();
        for w in hours.windows(2) {
            if w[1] - w[0] <= delivery_gap as usize {
                return bad(format!(
                    "deliveries at periods {} and {} are closer than {delivery_gap}",
                    w[0] + 1,
                    w[1] + 1
                ));
            }
        }
        for (k, &j) in self.contracts.iter().enumerate() {
            let c = &contracts[j];
            let row = plan.week(j, self.week);
            let sum = |v: &[f64]| v.iter().sum::<f64>();
            let scale = |x: f64| TOL * (1.0 + x.abs());
            let count = self.delivery[k].iter().filter(|&&f| f).count() as u32;
            if count != row.deliveries {
                return bad(format!(
                    "{}: {count} deliveries, plan has {}",
                    c.id, row.deliveries
                ));
            }
            if (sum(&self.amount[k]) - row.amount).abs() > scale(row.amount) {
                return bad(format!("{}: amounts do not add up to the plan", c.id));
            }
            if sum(&self.used_up[k]) > row.up + scale(row.up)
                || sum(&self.used_down[k]) > row.down + scale(row.down)
            {
                return bad(format!(
                    "{}: option usage above the purchased options",
                    c.id
                ));
            }
            for t in 0..self.periods {
                let f = if self.delivery[k][t] { 1.0 } else { 0.0 };
                let (b, up, dn) = (self.amount[k][t], self.used_up[k][t], self.used_down[k][t]);
                if b + up > c.amount_max * f + scale(c.amount_max)
                    || b - dn < c.amount_min * f - scale(c.amount_min)
                {
                    return bad(format!(
                        "{}: period {} amount outside the contract",
                        c.id,
                        t + 1
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Pins the first-week delivery columns of every scenario to `d`.
///
/// Contracts of `d` missing from the model must carry no delivery.
pub fn fix_week_decisions(om: &mut OperationalModel, d: &WeekDecisions) -> Result<()> {
    let ix = &om.index;
    if d.periods != ix.periods_per_week || d.week != ix.start_week {
        return Err(Phase2Error::Decisions(format!(
            "decisions for week {} with {} periods do not fit a model starting at week {} with {}",
            d.week + 1,
            d.periods,
            ix.start_week + 1,
            ix.periods_per_week
        )));
    }
    for (k, &j) in d.contracts.iter().enumerate() {
        if ix.contracts.contains(&j) {
            continue;
        }
        let idle = d.delivery[k].iter().all(|&f| !f)
            && [&d.amount[k], &d.used_up[k], &d.used_down[k]]
                .iter()
                .all(|v| v.iter().all(|&x| x == 0.0));
        if !idle {
            return Err(Phase2Error::Decisions(format!(
                "contract {} delivers but is not in the model",
                j + 1
            )));
        }
    }
    for (mk, &j) in ix.contracts.iter().enumerate() {
        let Some(k) = d.contracts.iter().position(|&c| c == j) else {
            return Err(Phase2Error::Decisions(format!(
                "no decisions for contract {}",
                j + 1
            )));
        };
        for t in 0..d.periods {
            for s in 0..ix.n_scenarios {
                let flag = if d.delivery[k][t] { 1.0 } else { 0.0 };
                om.model.fix(ix.delivery[mk][t][s], flag)?;
                om.model.fix(ix.amount[mk][t][s], d.amount[k][t])?;
                om.model.fix(ix.used_up[mk][t][s], d.used_up[k][t])?;
                om.model.fix(ix.used_down[mk][t][s], d.used_down[k][t])?;
            }
        }
    }
    Ok(())
}
