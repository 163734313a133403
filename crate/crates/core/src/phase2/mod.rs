//! Hourly receding-horizon operation with unit commitment.

mod check;
mod decisions;
mod model;
mod realize;

pub use check::scan_operational_solution;
pub use decisions::{extract_week_decisions, fix_week_decisions, WeekDecisions};
pub use model::{build_operational_model, OperationalIndex, OperationalModel};
pub use realize::{
    cost_breakdown, end_state, fix_and_realize, plan_week, realize_week, CostBreakdown,
    HourlyTrace, PlannedWeek, WeeklyResult,
};

use crate::domain::DomainError;
use crate::milp::MilpError;

#[derive(Debug, thiserror::Error)]
pub enum Phase2Error {
    #[error("grid mismatch: {0}")]
    Grid(String),
    #[error("contract plan has no row for week {0}")]
    MissingPlanWeek(usize),
    #[error("invalid system state: {0}")]
    State(String),
    #[error("scenario {scenario} disagrees on first-week `{name}` ({a} vs {b})")]
    Anticipative {
        name: String,
        scenario: usize,
        a: f64,
        b: f64,
    },
    #[error("`{name}` = {value} is not binary")]
    Integrality { name: String, value: f64 },
    #[error("invalid week decisions: {0}")]
    Decisions(String),
    #[error("solver returned no solution ({0})")]
    NoSolution(String),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

pub type Result<T> = std::result::Result<T, Phase2Error>;
