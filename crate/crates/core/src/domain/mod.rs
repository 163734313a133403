//! Plant, contract and scenario data, plus the small series transforms the
//! models consume.

mod config;
mod scenario;
mod series;
mod timeseries;

use std::fmt;

pub use config::{
    load_and_validate, AuxBoilerParams, BiomassStorageParams, ChpParams, ContractSpec, CostParams,
    PlantConfig, SafetyLevel, ThermalStorageParams,
};
pub(crate) use scenario::normalize_exact;
pub use scenario::{Resolution, Scenario, ScenarioSet, SystemState, TimeGrid};
pub use series::{
    aggregate_to_weekly, derive_cost_series, expand_daily_to_hourly, incentive_schedule,
    trim_to_year, AggregateKind, CostSeries, INCENTIVE_MAX, INCENTIVE_MIN, INCENTIVE_STEP,
};
pub use timeseries::{read_series, write_series, SeriesStep, TimeSeries};

/// Hours in one week.
pub const HOURS_PER_WEEK: usize = 168;
/// Weeks in one planning year.
pub const WEEKS_PER_YEAR: usize = 52;
/// Hours in one planning year (52 whole weeks).
pub const HOURS_PER_YEAR: usize = HOURS_PER_WEEK * WEEKS_PER_YEAR;

/// One broken invariant, located by a dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub invariant: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.invariant)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DomainError {
    #[error("malformed document at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("missing field `{path}`")]
    MissingField { path: String },
    #[error("invalid input: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("unit mismatch: {0}")]
    UnitMismatch(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl DomainError {
    pub(crate) fn invalid(path: impl Into<String>, invariant: impl Into<String>) -> Self {
        DomainError::Invalid(vec![Violation {
            path: path.into(),
            invariant: invariant.into(),
        }])
    }

    /// The violations carried by an `Invalid` error, empty otherwise.
    pub fn violations(&self) -> &[Violation] {
        match self {
            DomainError::Invalid(v) => v,
            _ => &[],
        }
    }
}

pub type Result<T, E = DomainError> = std::result::Result<T, E>;

/// Collects violations while walking a document.
#[derive(Default)]
pub(crate) struct Checker {
    found: Vec<Violation>,
}

impl Checker {
    pub(crate) fn check(&mut self, ok: bool, path: impl AsRef<str>, invariant: impl Into<String>) {
        if !ok {
            self.found.push(Violation {
                path: path.as_ref().to_string(),
                invariant: invariant.into(),
            });
        }
    }

    pub(crate) fn finish(self) -> Result<()> {
        if self.found.is_empty() {
            Ok(())
        } else {
            Err(DomainError::Invalid(self.found))
        }
    }
}
