use std::fmt;
use std::str::FromStr;

use super::{
    derive_seed, fit_armax, historical_scenarios, joint_features, k_medoids, simulate_paths,
    Archive, ArmaxOrders, DistanceMatrix, HistoricalYear, PathBundle, Result, ScenGenError,
    DEFAULT_K, DEFAULT_PATHS,
};
use crate::domain::{Resolution, Scenario, ScenarioSet, TimeGrid, HOURS_PER_WEEK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Historical years.
    P,
    /// Forecast week one, historical continuation afterwards.
    F1,
    /// Forecast the whole horizon.
    F2,
    PF1,
    PF2,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::P, Method::F1, Method::F2, Method::PF1, Method::PF2];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::P => "P",
            Method::F1 => "F1",
            Method::F2 => "F2",
            Method::PF1 => "P+F1",
            Method::PF2 => "P+F2",
        })
    }
}

impl FromStr for Method {
    type Err = ScenGenError;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ScenGenError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenGenConfig {
    pub orders: ArmaxOrders,
    pub n_paths: usize,
    pub k: usize,
    /// Most recent hours used for fitting.
    pub fit_hours: usize,
}

impl Default for ScenGenConfig {
    fn default() -> Self {
        ScenGenConfig {
            orders: ArmaxOrders::default(),
            n_paths: DEFAULT_PATHS,
            k: DEFAULT_K,
            fit_hours: 8 * HOURS_PER_WEEK,
        }
    }
}

/// Observations immediately preceding the target window.
#[derive(Debug, Clone, Copy)]
pub struct Recent<'a> {
    pub demand: &'a [f64],
    pub elec_price: &'a [f64],
}

fn tail(series: &[f64], n: usize) -> &[f64] {
    &series[series.len().saturating_sub(n)..]
}

/// Simulated and clustered demand and price over `hours`.
struct Forecast {
    demand: PathBundle,
    price: PathBundle,
    medoids: Vec<usize>,
    probabilities: Vec<f64>,
}

fn forecast(recent: Recent<'_>, hours: usize, seed: u64, cfg: &ScenGenConfig) -> Result<Forecast> {
    let dm = fit_armax(tail(recent.demand, cfg.fit_hours), cfg.orders)?;
    let pm = fit_armax(tail(recent.elec_price, cfg.fit_hours), cfg.orders)?;
    let demand =
        simulate_paths(&dm, hours, cfg.n_paths, derive_seed(seed, 0, "demand")).clip_at_zero();
    let price = simulate_paths(&pm, hours, cfg.n_paths, derive_seed(seed, 0, "price"));
    let dist = DistanceMatrix::from_points(&joint_features(&demand, &price));
    let c = k_medoids(&dist, cfg.k, derive_seed(seed, 0, "kmedoid"))?;
    Ok(Forecast {
        demand,
        price,
        medoids: c.medoids,
        probabilities: c.probabilities,
    })
}

/// Index of the archive year whose first-week window is closest to
/// `(demand, price)` in the bundle's standardized units; ties go to the
/// most recent year.
fn nearest_year(
    archive: &Archive,
    start: usize,
    demand: &[f64],
    price: &[f64],
    scale: ((f64, f64), (f64, f64)),
) -> usize {
    let ((md, sd), (mp, sp)) = scale;
    let mut best = (f64::INFINITY, 0);
    for (i, y) in archive.years().iter().enumerate() {
        let hd = HistoricalYear::window(&y.demand, start, demand.len());
        let hp = HistoricalYear::window(&y.elec_price, start, price.len());
        let d: f64 = demand
            .iter()
            .zip(&hd)
            .map(|(a, b)| ((a - md) / sd - (b - md) / sd).powi(2))
            .chain(
                price
                    .iter()
                    .zip(&hp)
                    .map(|(a, b)| ((a - mp) / sp - (b - mp) / sp).powi(2)),
            )
            .sum();
        if d <= best.0 {
            best = (d, i);
        }
    }
    best.1
}

fn pooled(bundle: &PathBundle) -> (f64, f64) {
    let n = (bundle.n_paths() * bundle.horizon()) as f64;
    let mean = bundle.paths().iter().flatten().sum::<f64>() / n;
    let var = bundle
        .paths()
        .iter()
        .flatten()
        .map(|v| (v - mean).powi(2))
        .sum::<f64>()
        / n;
    (mean, if var > 0.0 { var.sqrt() } else { 1.0 })
}

fn forecast_set(
    method: Method,
    archive: &Archive,
    recent: Recent<'_>,
    start_week: usize,
    horizon_weeks: usize,
    seed: u64,
    cfg: &ScenGenConfig,
) -> Result<ScenarioSet> {
    let hours = horizon_weeks * HOURS_PER_WEEK;
    let fuel = archive.expected_fuel(start_week, horizon_weeks);
    let start = start_week * HOURS_PER_WEEK;
    let simulated = match method {
        Method::F2 | Method::PF2 => hours,
        _ => HOURS_PER_WEEK,
    };
    let f = forecast(recent, simulated, seed, cfg)?;

    let top = f.probabilities.iter().enumerate().fold(0, |best, (i, &p)| {
        if p > f.probabilities[best] {
            i
        } else {
            best
        }
    });
    let scale = (pooled(&f.demand), pooled(&f.price));

    let mut scenarios = Vec::with_capacity(f.medoids.len());
    for (i, (&m, &p)) in f.medoids.iter().zip(&f.probabilities).enumerate() {
        let mut demand = f.demand.paths()[m].clone();
        let mut price = f.price.paths()[m].clone();
        if simulated < hours {
            let year = if i == top {
                archive.newest()
            } else {
                &archive.years()[nearest_year(archive, start, &demand, &price, scale)]
            };
            let rest = hours - simulated;
            demand.extend(HistoricalYear::window(
                &year.demand,
                start + simulated,
                rest,
            ));
            price.extend(HistoricalYear::window(
                &year.elec_price,
                start + simulated,
                rest,
            ));
        }
        scenarios.push(Scenario {
            probability: p,
            demand,
            elec_price: price,
            fuel_price: fuel.clone(),
        });
    }
    Ok(ScenarioSet::new(
        TimeGrid::hourly(horizon_weeks),
        scenarios,
    )?)
}

/// Hourly scenarios for weeks `start_week..start_week + horizon_weeks`.
///
/// Fuel prices are the archive's expected values in every method.
pub fn build_scenario_set(
    method: Method,
    archive: &Archive,
    recent: Recent<'_>,
    start_week: usize,
    horizon_weeks: usize,
    seed: u64,
    cfg: &ScenGenConfig,
) -> Result<ScenarioSet> {
    let historical = || -> Result<ScenarioSet> {
        let set = historical_scenarios(archive, start_week, horizon_weeks, Resolution::Hourly)?;
        Ok(set.with_fuel_price(&archive.expected_fuel(start_week, horizon_weeks))?)
    };
    match method {
        Method::P => historical(),
        Method::F1 | Method::F2 => forecast_set(
            method,
            archive,
            recent,
            start_week,
            horizon_weeks,
            seed,
            cfg,
        ),
        Method::PF1 | Method::PF2 => {
            let f = forecast_set(
                method,
                archive,
                recent,
                start_week,
                horizon_weeks,
                seed,
                cfg,
            )?;
            Ok(historical()?.union(&f)?)
        }
    }
}
