use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Phase1Error, Result};
use crate::domain::ContractSpec;

/// Phase-one commitments for one contract in one week.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WeekPlan {
    /// Number of deliveries.
    pub deliveries: u32,
    /// Tonnes.
    pub amount: f64,
    pub up: f64,
    pub down: f64,
}

impl WeekPlan {
    pub fn is_empty(&self) -> bool {
        self.deliveries == 0 && self.amount == 0.0 && self.up == 0.0 && self.down == 0.0
    }
}

/// Selected contracts and their weekly delivery schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractPlan {
    pub contract_ids: Vec<String>,
    pub selected: Vec<bool>,
    /// `weeks[j][w]`, 0-based.
    pub weeks: Vec<Vec<WeekPlan>>,
}

const TOL: f64 = 1e-6;

impl ContractPlan {
    pub fn empty(contracts: &[ContractSpec], n_weeks: usize) -> Self {
        ContractPlan {
            contract_ids: contracts.iter().map(|c| c.id.clone()).collect(),
            selected: vec![false; contracts.len()],
            weeks: vec![vec![WeekPlan::default(); n_weeks]; contracts.len()],
        }
    }

    pub fn n_contracts(&self) -> usize {
        self.contract_ids.len()
    }

    pub fn n_weeks(&self) -> usize {
        self.weeks.first().map_or(0, Vec::len)
    }

    pub fn week(&self, contract: usize, week: usize) -> &WeekPlan {
        &self.weeks[contract][week]
    }

    /// Indices of contracts with at least one delivery in `week`.
    pub fn active_in(&self, week: usize) -> Vec<usize> {
        (0..self.n_contracts())
            .filter(|&j| self.weeks[j][week].deliveries > 0)
            .collect()
    }

    /// Fixed contract cost of a week: base, up and down amounts at their
    /// contract prices.
    pub fn week_cost(&self, contracts: &[ContractSpec], week: usize) -> f64 {
        contracts
            .iter()
            .zip(&self.weeks)
            .map(|(c, rows)| {
                let r = &rows[week];
                c.base_price * r.amount + c.up_price * r.up + c.down_price * r.down
            })
            .sum()
    }

    /// Checks the plan against the contract terms.
    pub fn validate(&self, contracts: &[ContractSpec]) -> Result<()> {
        if contracts.len() != self.n_contracts() {
            return Err(Phase1Error::Plan(format!(
                "plan has {} contracts, {} offered",
                self.n_contracts(),
                contracts.len()
            )));
        }
        let mut problems = Vec::new();
        for (j, c) in contracts.iter().enumerate() {
            if c.id != self.contract_ids[j] {
                problems.push(format!(
                    "contract {} listed as `{}`",
                    c.id, self.contract_ids[j]
                ));
            }
            let total: u32 = self.weeks[j].iter().map(|w| w.deliveries).sum();
            if !self.selected[j] {
                if self.weeks[j].iter().any(|w| !w.is_empty()) {
                    problems.push(format!(
                        "contract {} is not selected but has deliveries",
                        c.id
                    ));
                }
                continue;
            }
            if total < c.deliveries_min || total > c.deliveries_max {
                problems.push(format!(
                    "contract {}: {total} deliveries outside [{}, {}]",
                    c.id, c.deliveries_min, c.deliveries_max
                ));
            }
            for (w, r) in self.weeks[j].iter().enumerate() {
                let n = r.deliveries as f64;
                let scale = c.amount_max.max(1.0) * n.max(1.0);
                let tol = TOL * scale;
                let bad = [
                    (
                        r.amount < -tol || r.up < -tol || r.down < -tol,
                        "negative amount",
                    ),
                    (r.up > c.opt_up * r.amount + tol, "up option above O+ B"),
                    (
                        r.down > c.opt_down * r.amount + tol,
                        "down option above O- B",
                    ),
                    (
                        r.amount + r.up > c.amount_max * n + tol,
                        "B + B+ above max amount",
                    ),
                    (
                        r.amount - r.down < c.amount_min * n - tol,
                        "B - B- below min amount",
                    ),
                ];
                for (hit, what) in bad {
                    if hit {
                        problems.push(format!("contract {} week {}: {what}", c.id, w + 1));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Phase1Error::Plan(problems.join("; ")))
        }
    }

    /// Rows `contract,week,U,B,B_plus,B_minus` for every week of every
    /// selected contract; weeks are 1-based.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["contract", "week", "U", "B", "B_plus", "B_minus"])?;
        for j in 0..self.n_contracts() {
            if !self.selected[j] {
                continue;
            }
            for (t, r) in self.weeks[j].iter().enumerate() {
                w.write_record([
                    self.contract_ids[j].clone(),
                    (t + 1).to_string(),
                    r.deliveries.to_string(),
                    r.amount.to_string(),
                    r.up.to_string(),
                    r.down.to_string(),
                ])?;
            }
        }
        w.flush().map_err(|e| Phase1Error::Plan(e.to_string()))
    }

    pub fn read_csv(path: &Path, contracts: &[ContractSpec], n_weeks: usize) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            contract: String,
            week: usize,
            #[serde(rename = "U")]
            u: u32,
            #[serde(rename = "B")]
            b: f64,
            #[serde(rename = "B_plus")]
            bp: f64,
            #[serde(rename = "B_minus")]
            bm: f64,
        }
        let mut plan = ContractPlan::empty(contracts, n_weeks);
        let mut r = csv::Reader::from_path(path)?;
        for row in r.deserialize::<Row>() {
            let row = row?;
            let j = plan
                .contract_ids
                .iter()
                .position(|id| *id == row.contract)
                .ok_or_else(|| Phase1Error::Plan(format!("unknown contract `{}`", row.contract)))?;
            if row.week == 0 || row.week > n_weeks {
                return Err(Phase1Error::Plan(format!("week {} out of range", row.week)));
            }
            plan.selected[j] = true;
            plan.weeks[j][row.week - 1] = WeekPlan {
                deliveries: row.u,
                amount: row.b,
                up: row.bp,
                down: row.bm,
            };
        }
        Ok(plan)
    }
}
