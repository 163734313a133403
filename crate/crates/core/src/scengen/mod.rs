//! Scenario generation: historical years, ARMAX Monte Carlo forecasts and
//! k-medoid reduction.

mod archive;
mod armax;
mod io;
mod kmedoid;
mod methods;
mod paths;

pub use archive::{historical_scenarios, Archive, HistoricalYear, YEAR_PROBABILITIES};
pub use armax::{fit_armax, ArmaxModel, ArmaxOrders, MIN_HISTORY, ROOT_MARGIN, SEASON};
pub use io::{read_scenarios, write_scenarios};
pub use kmedoid::{
    clustering_cost, joint_features, k_medoids, Clustering, DistanceMatrix, DEFAULT_K,
    MAX_SWAP_ITERATIONS,
};
pub use methods::{build_scenario_set, Method, Recent, ScenGenConfig};
pub use paths::{simulate_paths, PathBundle, DEFAULT_PATHS};

use crate::domain::{DomainError, ScenarioSet, TimeGrid};

#[derive(Debug, thiserror::Error)]
pub enum ScenGenError {
    #[error("need at least {needed} finite observations, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("fitted AR part is not stationary (smallest root modulus {min_root:.4})")]
    NonStationary { min_root: f64 },
    #[error("cannot pick {k} medoids from {n} paths")]
    TooFewPaths { k: usize, n: usize },
    #[error("unknown scenario method `{0}` (expected P, F1, F2, P+F1 or P+F2)")]
    UnknownMethod(String),
    #[error("archive: {0}")]
    Archive(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

pub type Result<T> = std::result::Result<T, ScenGenError>;

/// SplitMix64 finalizer.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    splitmix(splitmix(seed) ^ stream)
}

/// Independent sub-seed for `(week, purpose)` under a master seed.
pub fn derive_seed(master: u64, week: u64, purpose: &str) -> u64 {
    let tag = purpose.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    });
    mix_seed(mix_seed(master, week), tag)
}

/// Builds a set from medoid paths of a joint bundle.
pub fn reduce_k_medoid(
    demand: &PathBundle,
    price: &PathBundle,
    fuel: &[f64],
    grid: TimeGrid,
    k: usize,
    seed: u64,
) -> Result<ScenarioSet> {
    let dist = DistanceMatrix::from_points(&joint_features(demand, price));
    let c = k_medoids(&dist, k, seed)?;
    let scenarios = c
        .medoids
        .iter()
        .zip(&c.probabilities)
        .map(|(&m, &p)| crate::domain::Scenario {
            probability: p,
            demand: demand.paths()[m].clone(),
            elec_price: price.paths()[m].clone(),
            fuel_price: fuel.to_vec(),
        })
        .collect();
    Ok(ScenarioSet::new(grid, scenarios)?)
}
