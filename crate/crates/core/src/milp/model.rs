use std::collections::HashMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::{MilpError, Result};

/// Column handle, valid only for the model that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

impl VarKind {
    pub fn is_integral(self) -> bool {
        !matches!(self, VarKind::Continuous)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lb: f64,
    pub ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

/// Sum of `coef * var` terms plus a constant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn term(var: VarId, coef: f64) -> Self {
        LinExpr {
            terms: vec![(var, coef)],
            constant: 0.0,
        }
    }

    pub fn push(&mut self, var: VarId, coef: f64) -> &mut Self {
        self.terms.push((var, coef));
        self
    }

    pub fn add_constant(&mut self, c: f64) -> &mut Self {
        self.constant += c;
        self
    }

    pub fn sum<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        LinExpr {
            terms: vars.into_iter().map(|v| (v, 1.0)).collect(),
            constant: 0.0,
        }
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(v, c)| c * values[v.0])
            .sum::<f64>()
            + self.constant
    }

    /// Merges repeated variables, keeping first-occurrence order, and drops
    /// zero coefficients.
    pub(crate) fn merged(&self) -> Vec<(VarId, f64)> {
        let mut slot: HashMap<VarId, usize> = HashMap::with_capacity(self.terms.len());
        let mut out: Vec<(VarId, f64)> = Vec::with_capacity(self.terms.len());
        for &(v, c) in &self.terms {
            match slot.get(&v) {
                Some(&i) => out[i].1 += c,
                None => {
                    slot.insert(v, out.len());
                    out.push((v, c));
                }
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        out
    }
}

impl From<VarId> for LinExpr {
    fn from(v: VarId) -> Self {
        LinExpr::term(v, 1.0)
    }
}

impl AddAssign<LinExpr> for LinExpr {
    fn add_assign(&mut self, rhs: LinExpr) {
        self.terms.extend(rhs.terms);
        self.constant += rhs.constant;
    }
}

impl AddAssign<(VarId, f64)> for LinExpr {
    fn add_assign(&mut self, (v, c): (VarId, f64)) {
        self.terms.push((v, c));
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self += rhs;
        self
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(mut self) -> LinExpr {
        for t in &mut self.terms {
            t.1 = -t.1;
        }
        self.constant = -self.constant;
        self
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(self, rhs: LinExpr) -> LinExpr {
        self + (-rhs)
    }
}

impl Mul<f64> for LinExpr {
    type Output = LinExpr;
    fn mul(mut self, k: f64) -> LinExpr {
        for t in &mut self.terms {
            t.1 *= k;
        }
        self.constant *= k;
        self
    }
}

/// A linear row `terms (sense) rhs`. Terms are merged at insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    /// How far `values` are from satisfying the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// Names become MPS tokens, so they must be short and free of whitespace.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.len() <= 255
        && name.chars().all(|c| c.is_ascii_graphic())
        && !name.starts_with('$')
}

/// A minimisation MILP. Invariants hold at insertion time.
#[derive(Debug, Clone, Default)]
pub struct Model {
    name: String,
    vars: Vec<Variable>,
    by_name: HashMap<String, VarId>,
    constraints: Vec<Constraint>,
    row_names: HashMap<String, usize>,
    objective: LinExpr,
}

impl Model {
    pub fn new(name: impl Into<String>) -> Self {
        Model {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lb: f64,
        ub: f64,
    ) -> Result<VarId> {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(MilpError::BadName(name));
        }
        if self.by_name.contains_key(&name) {
            return Err(MilpError::DuplicateVariable(name));
        }
        let (lb, ub) = match kind {
            VarKind::Binary => (lb.max(0.0), ub.min(1.0)),
            _ => (lb, ub),
        };
        if lb.is_nan() || ub.is_nan() || lb > ub || lb == f64::INFINITY || ub == f64::NEG_INFINITY {
            return Err(MilpError::BadBounds { name, lb, ub });
        }
        let id = VarId(self.vars.len());
        self.by_name.insert(name.clone(), id);
        self.vars.push(Variable { name, kind, lb, ub });
        Ok(id)
    }

    /// Non-negative continuous variable.
    pub fn cont(&mut self, name: impl Into<String>) -> Result<VarId> {
        self.add_var(name, VarKind::Continuous, 0.0, f64::INFINITY)
    }

    pub fn binary(&mut self, name: impl Into<String>) -> Result<VarId> {
        self.add_var(name, VarKind::Binary, 0.0, 1.0)
    }

    /// Adds `expr (sense) rhs`; a constant inside `expr` moves to the rhs.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        expr: LinExpr,
        sense: Sense,
        rhs: f64,
    ) -> Result<()> {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(MilpError::BadName(name));
        }
        if self.row_names.contains_key(&name) || name == super::OBJECTIVE_ROW {
            return Err(MilpError::DuplicateConstraint(name));
        }
        if let Some(&(v, _)) = expr.terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            return Err(MilpError::UnknownVariable(format!("#{} in {name}", v.0)));
        }
        if !rhs.is_finite() || expr.terms.iter().any(|(_, c)| !c.is_finite()) {
            return Err(MilpError::NonFinite(name));
        }
        let terms = expr.merged();
        self.row_names.insert(name.clone(), self.constraints.len());
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs: rhs - expr.constant,
        });
        Ok(())
    }

    pub fn set_objective(&mut self, objective: LinExpr) -> Result<()> {
        if let Some(&(v, _)) = objective.terms.iter().find(|(v, _)| v.0 >= self.vars.len()) {
            return Err(MilpError::UnknownVariable(format!("#{} in objective", v.0)));
        }
        self.objective = LinExpr {
            terms: objective.merged(),
            constant: objective.constant,
        };
        Ok(())
    }

    pub fn objective(&self) -> &LinExpr {
        &self.objective
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.row_names.get(name).map(|&i| &self.constraints[i])
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_integer_vars(&self) -> usize {
        self.vars.iter().filter(|v| v.kind.is_integral()).count()
    }

    pub fn n_binary_vars(&self) -> usize {
        self.vars
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Pins a variable to `value` through its bounds.
    pub fn fix(&mut self, id: VarId, value: f64) -> Result<()> {
        let var = &mut self.vars[id.0];
        if !value.is_finite() {
            return Err(MilpError::BadBounds {
                name: var.name.clone(),
                lb: value,
                ub: value,
            });
        }
        var.lb = value;
        var.ub = value;
        Ok(())
    }

    pub fn set_bounds(&mut self, id: VarId, lb: f64, ub: f64) -> Result<()> {
        let var = &mut self.vars[id.0];
        if lb.is_nan() || ub.is_nan() || lb > ub {
            return Err(MilpError::BadBounds {
                name: var.name.clone(),
                lb,
                ub,
            });
        }
        var.lb = lb;
        var.ub = ub;
        Ok(())
    }

    /// Declares every integer and binary column continuous (bounds kept).
    pub fn relax_integrality(&mut self) {
        for v in &mut self.vars {
            v.kind = VarKind::Continuous;
        }
    }
}
