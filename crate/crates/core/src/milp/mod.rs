//! Algebraic MILP layer: build a model, write it as MPS, hand it to an
//! external solver and check what comes back.
//!
//! Column names follow `<symbol>_<index letters and 1-based numbers>`, for
//! example `b_j2_w14` or `p_t3_s1`; row names use the same scheme with a
//! constraint family prefix.

mod eval;
mod model;
mod mps;
mod solve;

pub use eval::{evaluate_point, evaluate_solution, Evaluation};
pub use model::{is_valid_name, Constraint, LinExpr, Model, Sense, VarId, VarKind, Variable};
pub use mps::{emit_mps, OBJECTIVE_ROW};
pub use solve::{
    default_template, parse_solution, solve_external, Assignment, SolveStatus, SolverBackend,
    DEFAULT_GAP, DEFAULT_TIME_LIMIT, SOLVER_ENV,
};

#[derive(Debug, thiserror::Error)]
pub enum MilpError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate constraint `{0}`")]
    DuplicateConstraint(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("name `{0}` is not MPS-safe")]
    BadName(String),
    #[error("bounds of `{name}` are inconsistent: [{lb}, {ub}]")]
    BadBounds { name: String, lb: f64, ub: f64 },
    #[error("non-finite coefficient in `{0}`")]
    NonFinite(String),
    #[error("no value for `{0}`")]
    MissingValue(String),
    #[error("unparsable solution: {0}")]
    BadSolution(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MilpError>;
