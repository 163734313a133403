//! Yearly contract selection on a weekly grid.

mod check;
mod model;
mod plan;

pub use check::scan_contract_solution;
pub use model::{
    build_contract_model, extract_contract_plan, fix_first_stage, frequency_window,
    max_weekly_deliveries, ContractIndex, ContractModel, ContractModelOptions, WeeklyPrices,
};
pub use plan::{ContractPlan, WeekPlan};

use crate::domain::DomainError;
use crate::milp::MilpError;

#[derive(Debug, thiserror::Error)]
pub enum Phase1Error {
    #[error("grid mismatch: {0}")]
    Grid(String),
    #[error("`{name}` = {value} is not integral")]
    Integrality { name: String, value: f64 },
    #[error("invalid contract plan: {0}")]
    Plan(String),
    #[error("solver returned no solution ({0})")]
    NoSolution(String),
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Phase1Error>;
