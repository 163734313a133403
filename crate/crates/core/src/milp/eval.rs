use super::{Assignment, MilpError, Model, Result};

/// Objective and feasibility of a point, recomputed from the model alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    /// Largest constraint or bound violation.
    pub max_violation: f64,
    /// Largest distance of an integer column from the nearest integer.
    pub max_integrality_violation: f64,
}

pub fn evaluate_point(model: &Model, values: &[f64]) -> Result<Evaluation> {
    if values.len() != model.n_vars() {
        return Err(MilpError::MissingValue(format!(
            "{} values for {} variables",
            values.len(),
            model.n_vars()
        )));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(MilpError::MissingValue(model.vars()[i].name.clone()));
    }
    let mut max_violation: f64 = 0.0;
    let mut max_int: f64 = 0.0;
    for (var, &x) in model.vars().iter().zip(values) {
        max_violation = max_violation.max(var.lb - x).max(x - var.ub);
        if var.kind.is_integral() {
            max_int = max_int.max((x - x.round()).abs());
        }
    }
    for c in model.constraints() {
        max_violation = max_violation.max(c.violation(values));
    }
    Ok(Evaluation {
        objective: model.objective().eval(values),
        max_violation,
        max_integrality_violation: max_int,
    })
}

/// Errors when the assignment carries no solution or lost columns.
pub fn evaluate_solution(model: &Model, assignment: &Assignment) -> Result<Evaluation> {
    if let Some(name) = assignment.missing.first() {
        return Err(MilpError::MissingValue(name.clone()));
    }
    evaluate_point(model, &assignment.values)
}
