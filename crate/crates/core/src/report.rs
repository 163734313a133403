//! CSV and JSON reports of year runs and comparisons.
//!
//! Numbers are written in Rust's shortest round-trip form so identical
//! results give byte-identical files.
//!
//! | file | columns |
//! |---|---|
//! | `year_result.csv` | `week` (1-based), cost components, `total`, `planned`, `missed_heat`, `excess_storage`, `emergency_fuel` |
//! | `weekly/week_NN.csv` | `period`, `power`, `q_chp`, `q_aux`, `q_storage_out`, `q_miss`, `biomass_level`, `thermal_level`, `inflow`, `deliveries`, `chp_on` |
//! | `biomass_storage.csv` | `week`, `level_start`, `level_end`, `level_min`, `deliveries`, `inflow` |
//! | `heat_production.csv` | `week`, `demand`, `chp`, `aux`, `storage_out`, `missed`, `power` |
//! | `plan.csv` | `contract`, `week`, `U`, `B`, `B_plus`, `B_minus` |
//! | `comparison.csv` | `sample`, `method`, `runs`, `min`, `max`, `avg`, `delta_min_pct`, `delta_max_pct`, `delta_avg_pct` |
//! | `result.json` | the full year result |

use std::fs;
use std::path::{Path, PathBuf};

use crate::orchestrator::{Comparison, YearResult};
use crate::phase1::{ContractPlan, Phase1Error};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Plan(#[from] Phase1Error),
}

pub type Result<T> = std::result::Result<T, ReportError>;

pub const YEAR_HEADER: [&str; 16] = [
    "week",
    "biomass",
    "chp_operating",
    "startup",
    "electricity",
    "auxiliary",
    "inventory",
    "penalty_miss",
    "penalty_storage",
    "penalty_fuel",
    "total",
    "planned",
    "missed_heat",
    "excess_storage",
    "emergency_fuel",
    "chp_hours",
];

pub const WEEK_HEADER: [&str; 11] = [
    "period",
    "power",
    "q_chp",
    "q_aux",
    "q_storage_out",
    "q_miss",
    "biomass_level",
    "thermal_level",
    "inflow",
    "deliveries",
    "chp_on",
];

pub const STORAGE_HEADER: [&str; 6] = [
    "week",
    "level_start",
    "level_end",
    "level_min",
    "deliveries",
    "inflow",
];

pub const HEAT_HEADER: [&str; 7] = [
    "week",
    "demand",
    "chp",
    "aux",
    "storage_out",
    "missed",
    "power",
];

pub const COMPARISON_HEADER: [&str; 9] = [
    "sample",
    "method",
    "runs",
    "min",
    "max",
    "avg",
    "delta_min_pct",
    "delta_max_pct",
    "delta_avg_pct",
];

fn num(x: f64) -> String {
    // avoid "-0"
    if x == 0.0 {
        "0".into()
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let csv_err = |source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn mkdir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

/// Writes every per-run file into `dir`; `demand` is the realized hourly
/// demand used for `heat_production.csv`.
pub fn write_year_report(
    dir: &Path,
    result: &YearResult,
    plan: Option<&ContractPlan>,
    demand: Option<&[f64]>,
) -> Result<()> {
    mkdir(dir)?;
    let weekly_dir = dir.join("weekly");
    mkdir(&weekly_dir)?;

    let mut year = Vec::new();
    let mut storage = Vec::new();
    let mut heat = Vec::new();
    for (i, w) in result.weekly.iter().enumerate() {
        let c = &w.costs;
        let tr = &w.trace;
        let week = (w.week + 1).to_string();
        year.push(vec![
            week.clone(),
            num(c.biomass),
            num(c.chp_operating),
            num(c.startup),
            num(c.electricity),
            num(c.auxiliary),
            num(c.inventory),
            num(c.penalty_miss),
            num(c.penalty_storage),
            num(c.penalty_fuel),
            num(w.total),
            result.planned.get(i).copied().map(num).unwrap_or_default(),
            num(w.missed_heat),
            num(w.excess_storage),
            num(w.emergency_fuel),
            tr.on.iter().filter(|&&on| on).count().to_string(),
        ]);
        storage.push(vec![
            week.clone(),
            num(w.start_state.biomass_level),
            num(w.end_state.biomass_level),
            num(tr
                .biomass_level
                .iter()
                .copied()
                .fold(w.start_state.biomass_level, f64::min)),
            tr.deliveries.iter().sum::<u32>().to_string(),
            num(sum(&tr.inflow)),
        ]);
        let n = tr.power.len();
        let d = demand
            .and_then(|d| d.get(w.week * n..(w.week + 1) * n))
            .map(sum);
        heat.push(vec![
            week,
            opt(d),
            num(sum(&tr.q_chp)),
            num(sum(&tr.q_aux)),
            num(sum(&tr.q_storage_out)),
            num(sum(&tr.q_miss)),
            num(sum(&tr.power)),
        ]);

        let hourly: Vec<Vec<String>> = (0..n)
            .map(|t| {
                vec![
                    (t + 1).to_string(),
                    num(tr.power[t]),
                    num(tr.q_chp[t]),
                    num(tr.q_aux[t]),
                    num(tr.q_storage_out[t]),
                    num(tr.q_miss[t]),
                    num(tr.biomass_level[t]),
                    num(tr.thermal_level[t]),
                    num(tr.inflow[t]),
                    tr.deliveries[t].to_string(),
                    u8::from(tr.on[t]).to_string(),
                ]
            })
            .collect();
        write_table(
            &weekly_dir.join(format!("week_{:02}.csv", w.week + 1)),
            &WEEK_HEADER,
            &hourly,
        )?;
    }
    write_table(&dir.join("year_result.csv"), &YEAR_HEADER, &year)?;
    write_table(&dir.join("biomass_storage.csv"), &STORAGE_HEADER, &storage)?;
    write_table(&dir.join("heat_production.csv"), &HEAT_HEADER, &heat)?;
    if let Some(plan) = plan {
        plan.write_csv(&dir.join("plan.csv"))?;
    }
    write_json(&dir.join("result.json"), result)
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| ReportError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    fs::write(path, text + "\n").map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a `result.json` written by [`write_year_report`].
pub fn read_year_result(path: &Path) -> Result<YearResult> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReportError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_comparison(path: &Path, comparison: &Comparison) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        mkdir(dir)?;
    }
    let rows: Vec<Vec<String>> = comparison
        .rows
        .iter()
        .map(|r| {
            vec![
                r.sample.clone(),
                r.method.clone(),
                r.runs.to_string(),
                num(r.min),
                num(r.max),
                num(r.avg),
                opt(r.delta_min_pct),
                opt(r.delta_max_pct),
                opt(r.delta_avg_pct),
            ]
        })
        .collect();
    write_table(path, &COMPARISON_HEADER, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orchestrator::{compare_runs, RunMeta};

    fn empty_year() -> YearResult {
        YearResult::new(
            RunMeta {
                method: "P".into(),
                horizon: 2,
                seed: 1,
                sample: "s".into(),
            },
            Vec::new(),
            Vec::new(),
        )
    }

    fn lines(p: &Path) -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(String::from)
            .collect()
    }

    #[test]
    fn empty_results_give_header_only_files() {
        let dir = tempfile::tempdir().unwrap();
        write_year_report(dir.path(), &empty_year(), None, None).unwrap();
        for (f, h) in [
            ("year_result.csv", &YEAR_HEADER[..]),
            ("biomass_storage.csv", &STORAGE_HEADER[..]),
            ("heat_production.csv", &HEAT_HEADER[..]),
        ] {
            assert_eq!(lines(&dir.path().join(f)), vec![h.join(",")]);
        }
        let back = read_year_result(&dir.path().join("result.json")).unwrap();
        assert_eq!(back, empty_year());

        let path = dir.path().join("comparison.csv");
        write_comparison(
            &path,
            &Comparison {
                baseline: "EV".into(),
                rows: Vec::new(),
            },
        )
        .unwrap();
        assert_eq!(lines(&path), vec![COMPARISON_HEADER.join(",")]);
    }

    #[test]
    fn comparison_table_layout() {
        // eleven samples, three horizons, two methods
        let mut rs = Vec::new();
        for s in 1..=11 {
            for h in 2..=4 {
                for (m, bump) in [("EV", 1.0), ("P", 0.0)] {
                    let mut y = empty_year();
                    y.meta = RunMeta {
                        method: m.into(),
                        horizon: h,
                        seed: 0,
                        sample: format!("sample{s:02}"),
                    };
                    y.total = 1000.0 + s as f64 + h as f64 + bump;
                    rs.push(y);
                }
            }
        }
        let c = compare_runs(&rs, "EV").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("comparison.csv");
        write_comparison(&path, &c).unwrap();
        let l = lines(&path);
        assert_eq!(l.len(), 1 + 2 * 11 + 2);
        assert_eq!(l[0], COMPARISON_HEADER.join(","));
        assert!(l[1].starts_with("sample01,EV,3,1004,1006,1005,,,"));
        assert!(l.last().unwrap().starts_with("average,P,33,"));
        assert!(l
            .iter()
            .skip(1)
            .all(|r| r.split(',').count() == COMPARISON_HEADER.len()));
    }
}
