use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Result, ScenGenError};
use crate::domain::{Scenario, ScenarioSet, TimeGrid};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    scenario: usize,
    probability: f64,
    period: usize,
    demand: f64,
    elec_price: f64,
    fuel_price: f64,
}

fn csv_err(path: &Path, e: csv::Error) -> ScenGenError {
    ScenGenError::Archive(format!("{}: {e}", path.display()))
}

/// One row per (scenario, period); ids and periods are 1-based.
pub fn write_scenarios(path: &Path, set: &ScenarioSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    for (i, s) in set.scenarios().iter().enumerate() {
        for t in 0..s.demand.len() {
            w.serialize(Row {
                scenario: i + 1,
                probability: s.probability,
                period: t + 1,
                demand: s.demand[t],
                elec_price: s.elec_price[t],
                fuel_price: s.fuel_price[t],
            })
            .map_err(|e| csv_err(path, e))?;
        }
    }
    w.flush()
        .map_err(|e| ScenGenError::Archive(format!("{}: {e}", path.display())))
}

pub fn read_scenarios(path: &Path, grid: TimeGrid) -> Result<ScenarioSet> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut by_id: BTreeMap<usize, Scenario> = BTreeMap::new();
    for row in r.deserialize::<Row>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let s = by_id.entry(row.scenario).or_insert_with(|| Scenario {
            probability: row.probability,
            demand: Vec::new(),
            elec_price: Vec::new(),
            fuel_price: Vec::new(),
        });
        if row.period != s.demand.len() + 1 {
            return Err(ScenGenError::Archive(format!(
                "{}: scenario {} period {} out of order",
                path.display(),
                row.scenario,
                row.period
            )));
        }
        s.demand.push(row.demand);
        s.elec_price.push(row.elec_price);
        s.fuel_price.push(row.fuel_price);
    }
    Ok(ScenarioSet::new(grid, by_id.into_values().collect())?)
}
