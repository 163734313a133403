use std::path::Path;

use super::{OrchestratorError, Result, StepError};
use crate::domain::{Scenario, ScenarioSet, TimeGrid, HOURS_PER_WEEK};
use crate::scengen::{build_scenario_set, Archive, HistoricalYear, Method, Recent, ScenGenConfig};

/// Realized demand and prices the year is evaluated against.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: String,
    /// 168 for real weeks; fewer for collapsed test weeks.
    pub periods_per_week: usize,
    pub demand: Vec<f64>,
    pub elec_price: Vec<f64>,
    pub fuel_price: Vec<f64>,
}

impl Sample {
    pub fn new(
        id: impl Into<String>,
        periods_per_week: usize,
        demand: Vec<f64>,
        elec_price: Vec<f64>,
        fuel_price: Vec<f64>,
    ) -> Result<Self> {
        let n = demand.len();
        if periods_per_week == 0 || n == 0 || !n.is_multiple_of(periods_per_week) {
            return Err(OrchestratorError::Input(format!(
                "sample of {n} periods is not a whole number of {periods_per_week}-period weeks"
            )));
        }
        if elec_price.len() != n || fuel_price.len() != n {
            return Err(OrchestratorError::Input(
                "sample series differ in length".into(),
            ));
        }
        if demand
            .iter()
            .chain(&elec_price)
            .chain(&fuel_price)
            .any(|v| !v.is_finite())
            || demand.iter().any(|&d| d < 0.0)
        {
            return Err(OrchestratorError::Input(
                "sample values must be finite with non-negative demand".into(),
            ));
        }
        Ok(Sample {
            id: id.into(),
            periods_per_week,
            demand,
            elec_price,
            fuel_price,
        })
    }

    pub fn from_year(year: &HistoricalYear) -> Result<Self> {
        Sample::new(
            year.label.clone(),
            HOURS_PER_WEEK,
            year.demand.clone(),
            year.elec_price.clone(),
            year.fuel_price.clone(),
        )
    }

    /// Reads `demand.csv`, `elec_price.csv` and `fuel_price.csv` from `dir`;
    /// the directory name is the sample id.
    pub fn load(dir: &Path, weeks: usize) -> Result<Self> {
        let id = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        let year = HistoricalYear::load(dir, "", &id, weeks)?;
        Sample::from_year(&year)
    }

    /// Writes the layout [`Sample::load`] reads; hourly stamps from `start`.
    pub fn write(&self, dir: &Path, start: chrono::NaiveDateTime) -> Result<()> {
        std::fs::create_dir_all(dir)
            .map_err(|e| OrchestratorError::Input(format!("{}: {e}", dir.display())))?;
        let year = HistoricalYear {
            label: self.id.clone(),
            demand: self.demand.clone(),
            elec_price: self.elec_price.clone(),
            fuel_price: self.fuel_price.clone(),
        };
        year.write(dir, "", start)?;
        Ok(())
    }

    pub fn n_weeks(&self) -> usize {
        self.demand.len() / self.periods_per_week
    }

    /// Realized values of week `week` as a one-scenario set.
    pub fn week(&self, week: usize) -> Result<ScenarioSet> {
        if week >= self.n_weeks() {
            return Err(OrchestratorError::Input(format!(
                "sample {} has no week {}",
                self.id,
                week + 1
            )));
        }
        let r = week * self.periods_per_week..(week + 1) * self.periods_per_week;
        let set = ScenarioSet::new(
            TimeGrid::hourly_collapsed(self.periods_per_week, 1),
            vec![Scenario {
                probability: 1.0,
                demand: self.demand[r.clone()].to_vec(),
                elec_price: self.elec_price[r.clone()].to_vec(),
                fuel_price: self.fuel_price[r].to_vec(),
            }],
        )?;
        Ok(set)
    }
}

/// Scenario fan for the window `start_week..start_week + n_weeks`.
///
/// Implementations may look at realized sample values before `start_week`
/// only.
pub trait ScenarioSource: Sync {
    fn label(&self) -> String;

    fn scenarios(
        &self,
        start_week: usize,
        n_weeks: usize,
        sample: &Sample,
        seed: u64,
    ) -> std::result::Result<ScenarioSet, StepError>;
}

/// One of the five archive-based methods.
#[derive(Debug, Clone)]
pub struct ArchiveSource<'a> {
    pub archive: &'a Archive,
    pub method: Method,
    pub config: ScenGenConfig,
}

impl<'a> ArchiveSource<'a> {
    pub fn new(archive: &'a Archive, method: Method) -> Self {
        ArchiveSource {
            archive,
            method,
            config: ScenGenConfig::default(),
        }
    }
}

impl ScenarioSource for ArchiveSource<'_> {
    fn label(&self) -> String {
        self.method.to_string()
    }

    fn scenarios(
        &self,
        start_week: usize,
        n_weeks: usize,
        sample: &Sample,
        seed: u64,
    ) -> std::result::Result<ScenarioSet, StepError> {
        if sample.periods_per_week != HOURS_PER_WEEK {
            return Err(StepError::Scenarios(crate::scengen::ScenGenError::Archive(
                "archive scenarios need an hourly sample".into(),
            )));
        }
        let newest = self.archive.newest();
        let seen = start_week * HOURS_PER_WEEK;
        let mut demand = newest.demand.clone();
        demand.extend_from_slice(&sample.demand[..seen]);
        let mut price = newest.elec_price.clone();
        price.extend_from_slice(&sample.elec_price[..seen]);
        let recent = Recent {
            demand: &demand,
            elec_price: &price,
        };
        Ok(build_scenario_set(
            self.method,
            self.archive,
            recent,
            start_week,
            n_weeks,
            seed,
            &self.config,
        )?)
    }
}

/// Collapses another source's fan to its probability-weighted mean.
#[derive(Debug, Clone)]
pub struct ExpectedSource<S>(pub S);

impl<S: ScenarioSource> ScenarioSource for ExpectedSource<S> {
    fn label(&self) -> String {
        "EV".into()
    }

    fn scenarios(
        &self,
        start_week: usize,
        n_weeks: usize,
        sample: &Sample,
        seed: u64,
    ) -> std::result::Result<ScenarioSet, StepError> {
        Ok(self
            .0
            .scenarios(start_week, n_weeks, sample, seed)?
            .expectation())
    }
}

/// Scenarios from a closure `(start_week, n_weeks, sample, seed)`.
pub struct FnSource<F> {
    pub label: String,
    pub f: F,
}

impl<F> FnSource<F>
where
    F: Fn(usize, usize, &Sample, u64) -> std::result::Result<ScenarioSet, StepError> + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnSource {
            label: label.into(),
            f,
        }
    }
}

impl<F> ScenarioSource for FnSource<F>
where
    F: Fn(usize, usize, &Sample, u64) -> std::result::Result<ScenarioSet, StepError> + Sync,
{
    fn label(&self) -> String {
        self.label.clone()
    }

    fn scenarios(
        &self,
        start_week: usize,
        n_weeks: usize,
        sample: &Sample,
        seed: u64,
    ) -> std::result::Result<ScenarioSet, StepError> {
        (self.f)(start_week, n_weeks, sample, seed)
    }
}
