use std::fmt::Write;

use super::{Model, Sense, VarKind};

/// Name of the objective row in emitted files.
pub const OBJECTIVE_ROW: &str = "OBJ";

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

fn field(out: &mut String, parts: &[&str]) {
    // fixed-format columns 2, 5, 15, 25, 40, 50; longer tokens push right
    const STARTS: [usize; 6] = [1, 4, 14, 24, 39, 49];
    let mut line = String::new();
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            continue;
        }
        let want = STARTS[i];
        if line.len() < want {
            line.push_str(&" ".repeat(want - line.len()));
        } else {
            line.push(' ');
        }
        line.push_str(p);
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Writes `model` as an MPS document (minimisation).
///
/// The output is a pure function of insertion order. The objective constant
/// `c` appears as `-c` on the objective row's RHS entry.
pub fn emit_mps(model: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", model.name());
    out.push_str("ROWS\n");
    field(&mut out, &["N", OBJECTIVE_ROW]);
    for c in model.constraints() {
        let s = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        field(&mut out, &[s, &c.name]);
    }

    let n = model.n_vars();
    let mut column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (v, coef) in &model.objective().terms {
        column[v.0].push((usize::MAX, *coef));
    }
    for (r, c) in model.constraints().iter().enumerate() {
        for (v, coef) in &c.terms {
            column[v.0].push((r, *coef));
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0usize;
    for (i, var) in model.vars().iter().enumerate() {
        let int = var.kind.is_integral();
        if int != in_int {
            let kind = if int { "'INTORG'" } else { "'INTEND'" };
            field(
                &mut out,
                &["", &format!("M{marker:07}"), "'MARKER'", "", kind],
            );
            marker += 1;
            in_int = int;
        }
        if column[i].is_empty() {
            // keep the column declared even if it appears nowhere
            field(&mut out, &["", &var.name, OBJECTIVE_ROW, "0"]);
        }
        for &(r, coef) in &column[i] {
            let row = if r == usize::MAX {
                OBJECTIVE_ROW
            } else {
                &model.constraints()[r].name
            };
            field(&mut out, &["", &var.name, row, &num(coef)]);
        }
    }
    if in_int {
        field(
            &mut out,
            &["", &format!("M{marker:07}"), "'MARKER'", "", "'INTEND'"],
        );
    }

    out.push_str("RHS\n");
    let constant = model.objective().constant;
    if constant != 0.0 {
        field(&mut out, &["", "RHS", OBJECTIVE_ROW, &num(-constant)]);
    }
    for c in model.constraints() {
        if c.rhs != 0.0 {
            field(&mut out, &["", "RHS", &c.name, &num(c.rhs)]);
        }
    }

    out.push_str("BOUNDS\n");
    for var in model.vars() {
        let name = var.name.as_str();
        let (lb, ub) = (var.lb, var.ub);
        if var.kind == VarKind::Binary && lb == 0.0 && ub == 1.0 {
            field(&mut out, &["BV", "BND", name]);
            continue;
        }
        if lb == ub {
            field(&mut out, &["FX", "BND", name, &num(lb)]);
            continue;
        }
        if lb == f64::NEG_INFINITY {
            field(&mut out, &["MI", "BND", name]);
        } else if lb != 0.0 {
            field(&mut out, &["LO", "BND", name, &num(lb)]);
        }
        if ub == f64::INFINITY {
            if var.kind.is_integral() {
                // integer columns inside markers otherwise default to [0, 1] in some readers
                field(&mut out, &["PL", "BND", name]);
            }
        } else {
            field(&mut out, &["UP", "BND", name, &num(ub)]);
        }
    }
    out.push_str("ENDATA\n");
    out
}
