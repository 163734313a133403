use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{DomainError, PlantConfig, Result, HOURS_PER_WEEK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resolution {
    Weekly,
    Hourly,
}

/// A run of whole weeks at weekly or hourly resolution.
///
/// Hourly grids normally carry 168 periods per week; `hourly_collapsed`
/// builds shortened weeks for exhaustive-enumeration test instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    resolution: Resolution,
    n_weeks: usize,
    periods_per_week: usize,
}

impl TimeGrid {
    pub fn weekly(n_weeks: usize) -> Self {
        TimeGrid {
            resolution: Resolution::Weekly,
            n_weeks,
            periods_per_week: 1,
        }
    }

    pub fn hourly(n_weeks: usize) -> Self {
        TimeGrid {
            resolution: Resolution::Hourly,
            n_weeks,
            periods_per_week: HOURS_PER_WEEK,
        }
    }

    pub fn hourly_collapsed(periods_per_week: usize, n_weeks: usize) -> Self {
        assert!(periods_per_week >= 1);
        TimeGrid {
            resolution: Resolution::Hourly,
            n_weeks,
            periods_per_week,
        }
    }

    pub fn resolution(&self) -> Resolution {
        self.resolution
    }

    pub fn n_weeks(&self) -> usize {
        self.n_weeks
    }

    pub fn periods_per_week(&self) -> usize {
        self.periods_per_week
    }

    pub fn n_periods(&self) -> usize {
        self.n_weeks * self.periods_per_week
    }

    /// 0-based period range of the 0-based week `week`.
    pub fn week_periods(&self, week: usize) -> Range<usize> {
        let start = week * self.periods_per_week;
        start..start + self.periods_per_week
    }

    /// 0-based week holding the 0-based period `t`.
    pub fn week_of(&self, t: usize) -> usize {
        t / self.periods_per_week
    }
}

/// One joint trajectory of the uncertain inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub probability: f64,
    /// MWt per period.
    pub demand: Vec<f64>,
    /// €/MWe
    pub elec_price: Vec<f64>,
    /// €/MWt
    pub fuel_price: Vec<f64>,
}

/// Weighted scenarios over a shared grid. Probabilities sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSet {
    grid: TimeGrid,
    scenarios: Vec<Scenario>,
}

pub(crate) const PROBABILITY_TOLERANCE: f64 = 1e-9;

impl ScenarioSet {
    pub fn new(grid: TimeGrid, scenarios: Vec<Scenario>) -> Result<Self> {
        if scenarios.is_empty() {
            return Err(DomainError::invalid("scenarios", "at least one scenario"));
        }
        let n = grid.n_periods();
        let mut total = 0.0;
        for (i, s) in scenarios.iter().enumerate() {
            for (name, series) in [
                ("demand", &s.demand),
                ("elec_price", &s.elec_price),
                ("fuel_price", &s.fuel_price),
            ] {
                if series.len() != n {
                    return Err(DomainError::UnitMismatch(format!(
                        "scenarios[{i}].{name} has {} values but the {:?} grid has {n} periods",
                        series.len(),
                        grid.resolution
                    )));
                }
                if series.iter().any(|v| !v.is_finite()) {
                    return Err(DomainError::invalid(
                        format!("scenarios[{i}].{name}"),
                        "all values finite",
                    ));
                }
            }
            if !(s.probability > 0.0 && s.probability <= 1.0) {
                return Err(DomainError::invalid(
                    format!("scenarios[{i}].probability"),
                    "probability in (0, 1]",
                ));
            }
            if s.demand.iter().any(|&d| d < 0.0) {
                return Err(DomainError::invalid(
                    format!("scenarios[{i}].demand"),
                    "demand >= 0",
                ));
            }
            total += s.probability;
        }
        if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(DomainError::invalid(
                "scenarios",
                format!("probabilities sum to 1 (got {total})"),
            ));
        }
        Ok(ScenarioSet { grid, scenarios })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.scenarios.iter().map(|s| s.probability).collect()
    }

    /// Single scenario holding the probability-weighted mean of every series.
    pub fn expectation(&self) -> ScenarioSet {
        let n = self.grid.n_periods();
        let mut mean = Scenario {
            probability: 1.0,
            demand: vec![0.0; n],
            elec_price: vec![0.0; n],
            fuel_price: vec![0.0; n],
        };
        for s in &self.scenarios {
            for t in 0..n {
                mean.demand[t] += s.probability * s.demand[t];
                mean.elec_price[t] += s.probability * s.elec_price[t];
                mean.fuel_price[t] += s.probability * s.fuel_price[t];
            }
        }
        ScenarioSet {
            grid: self.grid,
            scenarios: vec![mean],
        }
    }

    /// Joins two sets on the same grid, halving every probability.
    pub fn union(&self, other: &ScenarioSet) -> Result<ScenarioSet> {
        if self.grid != other.grid {
            return Err(DomainError::UnitMismatch(
                "cannot join scenario sets on different grids".into(),
            ));
        }
        let mut scenarios: Vec<Scenario> = self
            .scenarios
            .iter()
            .chain(&other.scenarios)
            .cloned()
            .collect();
        let mut probs: Vec<f64> = scenarios.iter().map(|s| s.probability).collect();
        normalize_exact(&mut probs);
        for (s, p) in scenarios.iter_mut().zip(probs) {
            s.probability = p;
        }
        ScenarioSet::new(self.grid, scenarios)
    }

    /// Replaces every scenario's fuel price series.
    pub fn with_fuel_price(mut self, fuel: &[f64]) -> Result<ScenarioSet> {
        if fuel.len() != self.grid.n_periods() {
            return Err(DomainError::UnitMismatch(format!(
                "fuel series has {} values, grid has {}",
                fuel.len(),
                self.grid.n_periods()
            )));
        }
        for s in &mut self.scenarios {
            s.fuel_price = fuel.to_vec();
        }
        Ok(self)
    }
}

/// Scales `probs` to sum to one so that the left-to-right floating point
/// sum is exactly `1.0`.
pub(crate) fn normalize_exact(probs: &mut [f64]) {
    if probs.is_empty() {
        return;
    }
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= total;
    }
    let n = probs.len();
    let head: f64 = probs[..n - 1].iter().sum();
    probs[n - 1] = 1.0 - head;
    debug_assert_eq!(probs.iter().sum::<f64>(), 1.0);
}

/// Week-boundary carry-over between consecutive operational weeks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    /// MWt
    pub biomass_level: f64,
    pub thermal_level: f64,
    pub chp_on: bool,
    /// MWe
    pub chp_power: f64,
    /// Consecutive hours spent in the current on/off status.
    pub hours_in_state: u32,
}

impl SystemState {
    /// Start-of-year state: storages at their initial levels, CHP off long
    /// enough to start at once.
    pub fn initial(plant: &PlantConfig) -> Self {
        SystemState {
            biomass_level: plant.biomass_storage.initial,
            thermal_level: plant.thermal_storage.initial,
            chp_on: false,
            chp_power: 0.0,
            hours_in_state: plant.chp.min_down,
        }
    }

    pub fn validate(&self, plant: &PlantConfig) -> Result<()> {
        let mut c = super::Checker::default();
        let ts = &plant.thermal_storage;
        c.check(
            self.biomass_level >= 0.0 && self.biomass_level.is_finite(),
            "state.biomass_level",
            "biomass_level >= 0",
        );
        c.check(
            self.thermal_level >= ts.cap_min - 1e-9 && self.thermal_level <= ts.cap_max + 1e-9,
            "state.thermal_level",
            "cap_min <= thermal_level <= cap_max",
        );
        c.check(
            self.chp_on || self.chp_power == 0.0,
            "state.chp_power",
            "chp off implies chp_power = 0",
        );
        c.check(self.chp_power >= 0.0, "state.chp_power", "chp_power >= 0");
        c.finish()
    }
}
