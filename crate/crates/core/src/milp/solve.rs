use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Duration;

use super::{emit_mps, MilpError, Model, Result};

/// Environment variable overriding the default backend command.
pub const SOLVER_ENV: &str = "PLANNER_SOLVER_CMD";
pub const DEFAULT_GAP: f64 = 1e-4;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// Stopped at a limit with an incumbent.
    FeasibleGap,
    Infeasible,
    Error,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::FeasibleGap)
    }
}

/// Values bound back to a model's columns by name.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    /// Indexed by `VarId::index`.
    pub values: Vec<f64>,
    pub objective: Option<f64>,
    pub status: SolveStatus,
    pub gap: Option<f64>,
    /// Columns absent from the solution file; their values were set to 0.
    pub missing: Vec<String>,
    pub diagnostics: String,
}

impl Assignment {
    pub fn value(&self, v: super::VarId) -> f64 {
        self.values[v.0]
    }

    fn failed(status: SolveStatus, n: usize, diagnostics: String) -> Self {
        Assignment {
            values: vec![0.0; n],
            objective: None,
            status,
            gap: None,
            missing: Vec::new(),
            diagnostics,
        }
    }
}

/// A shell command template with `{mps}`, `{sol}`, `{gap}` and
/// `{timelimit}` placeholders.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverBackend {
    pub template: String,
    pub gap: f64,
    pub time_limit: Duration,
    /// Keep the temporary MPS and solution files here instead of deleting them.
    pub keep_dir: Option<PathBuf>,
}

impl SolverBackend {
    pub fn new(template: impl Into<String>) -> Self {
        SolverBackend {
            template: template.into(),
            gap: DEFAULT_GAP,
            time_limit: DEFAULT_TIME_LIMIT,
            keep_dir: None,
        }
    }

    /// `$PLANNER_SOLVER_CMD` when set, else the HiGHS wrapper shipped in
    /// `scripts/`.
    pub fn from_env() -> Self {
        match std::env::var(SOLVER_ENV) {
            Ok(t) if !t.trim().is_empty() => SolverBackend::new(t),
            _ => SolverBackend::new(default_template()),
        }
    }

    pub fn with_gap(mut self, gap: f64) -> Self {
        self.gap = gap;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = limit;
        self
    }

    pub fn command_line(&self, mps: &Path, sol: &Path) -> String {
        self.template
            .replace("{mps}", &shell_quote(&mps.display().to_string()))
            .replace("{sol}", &shell_quote(&sol.display().to_string()))
            .replace("{gap}", &format!("{}", self.gap))
            .replace("{timelimit}", &format!("{}", self.time_limit.as_secs_f64()))
    }

    pub fn solve(&self, model: &Model) -> Result<Assignment> {
        solve_external(model, self)
    }
}

pub fn default_template() -> String {
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scripts/highs_solve.py");
    let script = script.canonicalize().unwrap_or(script);
    format!(
        "python3 {} {{mps}} {{sol}} {{gap}} {{timelimit}}",
        shell_quote(&script.display().to_string())
    )
}

fn shell_quote(s: &str) -> String {
    if s.chars()
        .all(|c| c.is_ascii_alphanumeric() || "/._-+=:,".contains(c))
    {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

/// Writes the model, runs the backend and binds its solution by name.
///
/// Backend failures come back as `SolveStatus::Error` with the captured
/// output; only I/O problems and unreadable solution files are `Err`.
pub fn solve_external(model: &Model, backend: &SolverBackend) -> Result<Assignment> {
    let dir = tempfile::Builder::new().prefix("milp-").tempdir()?;
    let mps = dir
        .path()
        .join(format!("{}.mps", safe_file_stem(model.name())));
    let sol = dir.path().join("solution.sol");
    std::fs::write(&mps, emit_mps(model))?;

    let cmd = backend.command_line(&mps, &sol);
    log::debug!(
        "solving {} ({} cols, {} rows): {cmd}",
        model.name(),
        model.n_vars(),
        model.constraints().len()
    );
    let output = Command::new("sh").arg("-c").arg(&cmd).output()?;
    let diagnostics = format!(
        "{}{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );

    let result = if !output.status.success() {
        Ok(Assignment::failed(
            SolveStatus::Error,
            model.n_vars(),
            format!("backend exited with {}: {diagnostics}", output.status),
        ))
    } else if !sol.exists() {
        Ok(Assignment::failed(
            SolveStatus::Error,
            model.n_vars(),
            format!("backend wrote no solution file: {diagnostics}"),
        ))
    } else {
        let text = std::fs::read_to_string(&sol)?;
        parse_solution(model, &text).map(|mut a| {
            a.diagnostics = diagnostics;
            a
        })
    };

    if let Some(keep) = &backend.keep_dir {
        std::fs::create_dir_all(keep)?;
        let _ = std::fs::copy(&mps, keep.join(mps.file_name().unwrap()));
        if sol.exists() {
            let _ = std::fs::copy(
                &sol,
                keep.join(format!("{}.sol", safe_file_stem(model.name()))),
            );
        }
    }
    result
}

fn safe_file_stem(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "model".into()
    } else {
        s
    }
}

fn map_status(raw: &str) -> SolveStatus {
    let s = raw.trim().to_ascii_lowercase();
    if s.starts_with("error") {
        SolveStatus::Error
    } else if s.contains("infeasible") || s.contains("unbounded") {
        SolveStatus::Infeasible
    } else if s.contains("optimal") {
        SolveStatus::Optimal
    } else if s.contains("limit") || s.contains("feasible") || s.contains("interrupt") {
        SolveStatus::FeasibleGap
    } else {
        SolveStatus::Error
    }
}

fn parse_number(tok: &str) -> Option<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

/// Parses either the `name value` pairs dialect (with optional
/// `solution status:` / `objective value:` / `gap:` header lines) or the
/// HiGHS raw-solution dialect with a `# Columns N` section.
pub fn parse_solution(model: &Model, text: &str) -> Result<Assignment> {
    let mut status: Option<SolveStatus> = None;
    let mut objective = None;
    let mut gap = None;
    let mut found: HashMap<&str, f64> = HashMap::new();

    let lines: Vec<&str> = text.lines().collect();
    let highs = lines.iter().any(|l| l.starts_with("# Columns"));

    if highs {
        let mut i = 0;
        while i < lines.len() {
            let l = lines[i].trim();
            if l == "Model status" {
                status = lines.get(i + 1).map(|s| map_status(s));
                i += 2;
                continue;
            }
            if let Some(rest) = l.strip_prefix("Objective ") {
                objective = parse_number(rest.trim());
            }
            if let Some(rest) = l.strip_prefix("# Columns ") {
                let n: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| MilpError::BadSolution(format!("bad column count `{rest}`")))?;
                for row in lines.iter().skip(i + 1).take(n) {
                    let mut it = row.split_whitespace();
                    let (Some(name), Some(val), None) = (it.next(), it.next(), it.next()) else {
                        return Err(MilpError::BadSolution(format!("bad column line `{row}`")));
                    };
                    let v = parse_number(val)
                        .ok_or_else(|| MilpError::BadSolution(format!("bad value `{val}`")))?;
                    found.insert(name, v);
                }
                break;
            }
            i += 1;
        }
    } else {
        for raw in &lines {
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let lower = l.to_ascii_lowercase();
            if let Some(rest) = lower.strip_prefix("solution status:") {
                status = Some(map_status(rest));
                continue;
            }
            if let Some(rest) = lower.strip_prefix("objective value:") {
                objective = parse_number(rest.trim());
                continue;
            }
            if let Some(rest) = lower.strip_prefix("gap:") {
                gap = parse_number(rest.trim().trim_end_matches('%'));
                continue;
            }
            let mut it = l.split_whitespace();
            let (Some(name), Some(val)) = (it.next(), it.next()) else {
                return Err(MilpError::BadSolution(format!("unrecognised line `{l}`")));
            };
            let v = parse_number(val)
                .ok_or_else(|| MilpError::BadSolution(format!("bad value in `{l}`")))?;
            found.insert(name, v);
        }
    }

    let status = match status {
        Some(s) => s,
        None if !found.is_empty() => SolveStatus::Optimal,
        None => return Err(MilpError::BadSolution("no status and no values".into())),
    };
    if !status.has_solution() || found.is_empty() {
        let status = if status.has_solution() {
            SolveStatus::Error
        } else {
            status
        };
        return Ok(Assignment {
            objective: None,
            gap,
            ..Assignment::failed(status, model.n_vars(), String::new())
        });
    }

    let mut values = Vec::with_capacity(model.n_vars());
    let mut missing = Vec::new();
    for var in model.vars() {
        match found.get(var.name.as_str()) {
            Some(&v) => values.push(v),
            None => {
                missing.push(var.name.clone());
                values.push(0.0);
            }
        }
    }
    if !missing.is_empty() {
        log::warn!(
            "{}: {} variables missing from solution, set to 0",
            model.name(),
            missing.len()
        );
    }
    Ok(Assignment {
        values,
        objective,
        status,
        gap,
        missing,
        diagnostics: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{Sense, VarKind};

    fn two() -> Model {
        let mut m = Model::new("two");
        m.add_var("a", VarKind::Binary, 0.0, 1.0).unwrap();
        m.add_var("b", VarKind::Continuous, 0.0, 5.0).unwrap();
        let a = m.var_id("a").unwrap();
        m.add_constraint("r", a.into(), Sense::Le, 1.0).unwrap();
        m
    }

    #[test]
    fn pairs_dialect() {
        let a = parse_solution(
            &two(),
            "solution status: optimal\nobjective value: -3\ngap: 0\na 1\nb 2.5\n",
        )
        .unwrap();
        assert_eq!(a.status, SolveStatus::Optimal);
        assert_eq!(a.values, vec![1.0, 2.5]);
        assert_eq!(a.objective, Some(-3.0));
        assert!(a.missing.is_empty());
    }

    #[test]
    fn highs_dialect() {
        let text = "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective 7\n# Columns 2\na 1\nb 3\n# Rows 1\nr 1\n";
        let a = parse_solution(&two(), text).unwrap();
        assert_eq!(a.values, vec![1.0, 3.0]);
        assert_eq!(a.objective, Some(7.0));
    }

    #[test]
    fn missing_columns_default_to_zero() {
        let a = parse_solution(&two(), "solution status: optimal\na 1\n").unwrap();
        assert_eq!(a.values, vec![1.0, 0.0]);
        assert_eq!(a.missing, vec!["b".to_string()]);
    }

    #[test]
    fn infeasible_status() {
        let a = parse_solution(&two(), "solution status: infeasible\n").unwrap();
        assert_eq!(a.status, SolveStatus::Infeasible);
        let a = parse_solution(&two(), "solution status: time limit reached\na 1\nb 1\n").unwrap();
        assert_eq!(a.status, SolveStatus::FeasibleGap);
    }

    #[test]
    fn garbage_rejected() {
        assert!(parse_solution(&two(), "").is_err());
        assert!(parse_solution(&two(), "a one\n").is_err());
    }

    #[test]
    fn template_substitution() {
        let b = SolverBackend::new("solve {mps} -o {sol} --gap {gap} --tl {timelimit}")
            .with_time_limit(Duration::from_secs(30));
        let line = b.command_line(Path::new("/tmp/m.mps"), Path::new("/tmp/x y.sol"));
        assert_eq!(
            line,
            "solve /tmp/m.mps -o '/tmp/x y.sol' --gap 0.0001 --tl 30"
        );
    }

    #[test]
    fn failing_backend_is_error_status() {
        let a = solve_external(&two(), &SolverBackend::new("echo boom >&2; exit 4")).unwrap();
        assert_eq!(a.status, SolveStatus::Error);
        assert!(a.diagnostics.contains("boom"));
    }
}
