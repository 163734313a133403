//! Two-phase stochastic planning of biomass supply contracts and hourly CHP
//! operation.
//!
//! Phase one picks yearly supply contracts (delivery counts, base amounts and
//! up/down options) from a weekly two-stage stochastic MILP. Phase two
//! schedules the plant hour by hour, one week at a time, with a receding
//! horizon over a scenario fan and evaluates the committed week against a
//! realized sample.
//!
//! MILPs are written as MPS files and handed to an external solver process,
//! see [`milp::SolverBackend`].

#![allow(clippy::needless_range_loop)]

pub mod domain;
pub mod milp;
pub mod orchestrator;
pub mod phase1;
pub mod phase2;
pub mod report;
pub mod scengen;
pub mod synthetic;

pub use domain::{ContractSpec, PlantConfig, Scenario, ScenarioSet, SystemState, TimeGrid};
pub use milp::{Assignment, Model, SolveStatus, SolverBackend};
pub use orchestrator::YearResult;
pub use phase1::ContractPlan;
pub use phase2::{WeekDecisions, WeeklyResult};
