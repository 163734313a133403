use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use bioplan::domain::{load_and_validate, ContractSpec, PlantConfig};
use bioplan::milp::{SolverBackend, DEFAULT_GAP};
use bioplan::orchestrator::{
    compare_runs, run_receding_year, solve_contract_phase, ArchiveSource, ContractInputs,
    ExpectedSource, OrchestratorError, RunOptions, Sample, ScenarioSource,
};
use bioplan::phase1::ContractPlan;
use bioplan::report::{read_year_result, write_comparison, write_json, write_year_report};
use bioplan::scengen::{
    build_scenario_set, derive_seed, write_scenarios, Archive, Method, Recent, ScenGenConfig,
};
use bioplan::synthetic::{synthetic_archive, synthetic_year, ArchiveShape};
use bioplan::YearResult;

use crate::manifest::{pick, RunManifest};
use crate::{Cli, Command};

pub const MAX_HORIZON: usize = 8;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Solver(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Solver(m) => f.write_str(m),
        }
    }
}

impl From<OrchestratorError> for Failure {
    fn from(e: OrchestratorError) -> Self {
        if e.is_solver_failure() {
            Failure::Solver(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

fn data(e: impl fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn backend(cli: &Cli, m: &RunManifest) -> SolverBackend {
    let mut b = match cli.solver.clone().or_else(|| m.solver.clone()) {
        Some(t) => SolverBackend::new(t),
        None => SolverBackend::from_env(),
    };
    b = b.with_gap(cli.gap.or(m.gap).unwrap_or(DEFAULT_GAP));
    if let Some(s) = cli.time_limit {
        b = b.with_time_limit(Duration::from_secs_f64(s));
    }
    b
}

fn load_config(path: &Path) -> Result<(PlantConfig, Vec<ContractSpec>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    load_and_validate(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_archive(dir: &Path, weeks: usize) -> Result<Archive, Failure> {
    Archive::load(dir, weeks).map_err(|e| Failure::Data(format!("archive {}: {e}", dir.display())))
}

fn load_sample(dir: &Path, weeks: usize) -> Result<Sample, Failure> {
    for q in ["demand", "elec_price", "fuel_price"] {
        let f = dir.join(format!("{q}.csv"));
        if !f.is_file() {
            return Err(Failure::Data(format!(
                "sample file not found: {}",
                f.display()
            )));
        }
    }
    Sample::load(dir, weeks).map_err(|e| Failure::Data(format!("sample {}: {e}", dir.display())))
}

fn parse_method(s: &str) -> Result<Method, Failure> {
    s.parse::<Method>()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn check_horizon(w: usize, name: &str) -> Result<usize, Failure> {
    if (1..=MAX_HORIZON).contains(&w) {
        Ok(w)
    } else {
        Err(Failure::Usage(format!(
            "--{name} must be in 1..={MAX_HORIZON}, got {w}"
        )))
    }
}

/// Creates `dir` and proves it is writable.
fn output_dir(dir: &Path) -> Result<PathBuf, Failure> {
    let fail = |e: std::io::Error| Failure::Data(format!("output {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".write-probe");
    std::fs::write(&probe, b"").map_err(fail)?;
    std::fs::remove_file(&probe).map_err(fail)?;
    Ok(dir.to_path_buf())
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    let m = match &cli.manifest {
        Some(p) => RunManifest::load(p)?,
        None => RunManifest::default(),
    };
    let name = match &cli.command {
        Command::Validate { .. } => "validate",
        Command::GenScenarios { .. } => "gen-scenarios",
        Command::PlanContracts { .. } => "plan-contracts",
        Command::SimulateYear { .. } => "simulate-year",
        Command::Compare { .. } => "compare",
        Command::SynthArchive { .. } => "synth-archive",
    };
    if let Some(s) = &m.subcommand {
        if s != name {
            return Err(Failure::Usage(format!(
                "manifest is for `{s}`, not `{name}`"
            )));
        }
    }
    let backend = backend(&cli, &m);
    match cli.command {
        Command::Validate { config, archive } => {
            let config = pick(config, m.config.clone(), "config")?;
            let (plant, contracts) = load_config(&config)?;
            println!(
                "{}: plant {}, {} weeks, {} contracts: ok",
                config.display(),
                plant.name,
                plant.weeks,
                contracts.len()
            );
            if let Some(dir) = archive.or(m.archive.clone()) {
                let a = load_archive(&dir, plant.weeks)?;
                let labels: Vec<&str> = a.years().iter().map(|y| y.label.as_str()).collect();
                println!("{}: years {}: ok", dir.display(), labels.join(", "));
            }
            Ok(())
        }
        Command::GenScenarios {
            config,
            archive,
            sample,
            method,
            week,
            horizon,
            seed,
            output,
        } => {
            let method = parse_method(&pick(method, m.method.clone(), "method")?)?;
            let week = pick(week, m.week, "week")?;
            let horizon = check_horizon(pick(horizon, m.horizon_weeks, "horizon")?, "horizon")?;
            let seed = pick(seed, m.seed, "seed")?;
            let config = pick(config, m.config.clone(), "config")?;
            let archive = pick(archive, m.archive.clone(), "archive")?;
            let out = pick(output, m.output.clone(), "output")?;
            let (plant, _) = load_config(&config)?;
            if week == 0 || week > plant.weeks {
                return Err(Failure::Usage(format!(
                    "--week must be in 1..={}, got {week}",
                    plant.weeks
                )));
            }
            let archive = load_archive(&archive, plant.weeks)?;
            let w = week - 1;
            let sub = derive_seed(seed, w as u64, "scenarios");
            let set = match sample.or(m.sample.clone()) {
                Some(dir) => {
                    let s = load_sample(&dir, plant.weeks)?;
                    ArchiveSource::new(&archive, method)
                        .scenarios(w, horizon, &s, sub)
                        .map_err(data)?
                }
                None => {
                    let y = archive.newest();
                    let recent = Recent {
                        demand: &y.demand,
                        elec_price: &y.elec_price,
                    };
                    build_scenario_set(
                        method,
                        &archive,
                        recent,
                        w,
                        horizon,
                        sub,
                        &ScenGenConfig::default(),
                    )
                    .map_err(data)?
                }
            };
            let dir = output_dir(&out)?;
            let path = dir.join("scenarios.csv");
            write_scenarios(&path, &set).map_err(data)?;
            println!(
                "{}: {} scenarios, {} hours",
                path.display(),
                set.len(),
                set.grid().n_periods()
            );
            Ok(())
        }
        Command::PlanContracts {
            config,
            archive,
            expected_value,
            output,
        } => {
            let config = pick(config, m.config.clone(), "config")?;
            let archive = pick(archive, m.archive.clone(), "archive")?;
            let out = pick(output, m.output.clone(), "output")?;
            let ev = expected_value || m.expected_value.unwrap_or(false);
            let (plant, contracts) = load_config(&config)?;
            let archive = load_archive(&archive, plant.weeks)?;
            let dir = output_dir(&out)?;
            let plan = plan_contracts(&backend, &plant, &contracts, &archive, ev, &dir)?;
            plan.write_csv(&dir.join("plan.csv")).map_err(data)?;
            let chosen: Vec<&str> = plan
                .contract_ids
                .iter()
                .zip(&plan.selected)
                .filter(|(_, &u)| u)
                .map(|(id, _)| id.as_str())
                .collect();
            println!(
                "{}: selected contracts [{}]",
                dir.join("plan.csv").display(),
                chosen.join(", ")
            );
            Ok(())
        }
        Command::SimulateYear {
            config,
            archive,
            sample,
            plan,
            method,
            horizon_weeks,
            expected_value,
            seed,
            output,
        } => {
            let ev = expected_value || m.expected_value.unwrap_or(false);
            let method = match method.or(m.method.clone()) {
                Some(s) => parse_method(&s)?,
                None if ev => Method::P,
                None => {
                    return Err(Failure::Usage(
                        "missing --method (or `method` in the manifest)".into(),
                    ))
                }
            };
            let horizon = check_horizon(
                pick(horizon_weeks, m.horizon_weeks, "horizon-weeks")?,
                "horizon-weeks",
            )?;
            let seed = pick(seed, m.seed, "seed")?;
            let config = pick(config, m.config.clone(), "config")?;
            let archive_dir = pick(archive, m.archive.clone(), "archive")?;
            let sample_dir = pick(sample, m.sample.clone(), "sample")?;
            let out = pick(output, m.output.clone(), "output")?;
            let plan_path = plan.or(m.plan.clone());

            let (plant, contracts) = load_config(&config)?;
            let sample = load_sample(&sample_dir, plant.weeks)?;
            let archive = load_archive(&archive_dir, plant.weeks)?;
            let dir = output_dir(&out)?;
            let plan = match &plan_path {
                Some(p) => ContractPlan::read_csv(p, &contracts, plant.weeks)
                    .map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?,
                None => plan_contracts(&backend, &plant, &contracts, &archive, ev, &dir)?,
            };
            let opts = RunOptions {
                horizon,
                seed,
                dump_dir: Some(dir.join("models")),
            };
            let base = ArchiveSource::new(&archive, method);
            let ev_source = ExpectedSource(base.clone());
            let source: &dyn ScenarioSource = if ev { &ev_source } else { &base };
            let result =
                run_receding_year(&backend, &plant, &contracts, &plan, &sample, source, &opts)?;
            write_year_report(&dir, &result, Some(&plan), Some(&sample.demand)).map_err(data)?;
            let effective = RunManifest {
                subcommand: Some("simulate-year".into()),
                config: Some(config),
                archive: Some(archive_dir),
                sample: Some(sample_dir),
                plan: plan_path,
                method: Some(method.to_string()),
                horizon_weeks: Some(horizon),
                expected_value: Some(ev),
                seed: Some(seed),
                solver: Some(backend.template.clone()),
                gap: Some(backend.gap),
                output: Some(out),
                ..RunManifest::default()
            };
            write_json(&dir.join("manifest.json"), &effective).map_err(data)?;
            summarize(&result);
            Ok(())
        }
        Command::Compare {
            runs,
            baseline,
            output,
        } => {
            let runs = if runs.is_empty() {
                m.runs.clone()
            } else {
                runs
            };
            if runs.len() < 2 {
                return Err(Failure::Usage(
                    "--runs needs at least two run directories".into(),
                ));
            }
            let baseline = baseline
                .or(m.baseline.clone())
                .unwrap_or_else(|| "EV".into());
            let out = pick(output, m.output.clone(), "output")?;
            let results = runs
                .iter()
                .map(|r| {
                    let p = if r.is_dir() {
                        r.join("result.json")
                    } else {
                        r.clone()
                    };
                    read_year_result(&p).map_err(data)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let c = compare_runs(&results, &baseline)?;
            let dir = output_dir(&out)?;
            let path = dir.join("comparison.csv");
            write_comparison(&path, &c).map_err(data)?;
            for r in &c.rows {
                let d = r
                    .delta_avg_pct
                    .map(|d| format!("{d:.3}%"))
                    .unwrap_or_default();
                println!("{:<12} {:<6} avg {:>14.2} {d}", r.sample, r.method, r.avg);
            }
            Ok(())
        }
        Command::SynthArchive {
            weeks,
            demand_level,
            seed,
            output,
        } => {
            let seed = pick(seed, m.seed, "seed")?;
            let out = pick(output, m.output.clone(), "output")?;
            let mut shape = ArchiveShape::default();
            if let Some(w) = weeks {
                shape.weeks = w;
            }
            if let Some(d) = demand_level {
                shape.demand_level = d;
            }
            if shape.weeks == 0 || !shape.demand_level.is_finite() || shape.demand_level < 0.0 {
                return Err(Failure::Usage(
                    "--weeks must be positive and --demand-level non-negative".into(),
                ));
            }
            let dir = output_dir(&out)?;
            let archive_dir = output_dir(&dir.join("archive"))?;
            synthetic_archive(&shape, seed)
                .write(&archive_dir, 2015)
                .map_err(data)?;
            let year = synthetic_year(&shape, "sample", derive_seed(seed, 0, "sample"));
            let sample = Sample::from_year(&year)?;
            let start = chrono_start();
            sample.write(&dir.join("sample"), start)?;
            println!(
                "{}: archive/ and sample/ over {} weeks",
                dir.display(),
                shape.weeks
            );
            Ok(())
        }
    }
}

fn chrono_start() -> chrono::NaiveDateTime {
    chrono::NaiveDate::from_ymd_opt(2020, 7, 1)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid date")
}

fn plan_contracts(
    backend: &SolverBackend,
    plant: &PlantConfig,
    contracts: &[ContractSpec],
    archive: &Archive,
    expected_value: bool,
    dir: &Path,
) -> Result<ContractPlan, Failure> {
    let inputs = ContractInputs::from_archive(archive, plant.weeks)?;
    let inputs = if expected_value {
        inputs.expected_value()
    } else {
        inputs
    };
    let phase = solve_contract_phase(
        backend,
        plant,
        contracts,
        &inputs,
        Some(&dir.join("models")),
    )?;
    log::info!("contract phase objective {:.2}", phase.objective);
    Ok(phase.plan)
}

fn summarize(r: &YearResult) {
    println!(
        "{} {} W={} seed={}: total {:.2}, penalties {:.2}, missed heat {:.3} MWh over {} weeks",
        r.meta.sample,
        r.meta.method,
        r.meta.horizon,
        r.meta.seed,
        r.total,
        r.penalty_total,
        r.missed_total,
        r.weekly.len()
    );
}
