//! Small deterministic instances for tests, the acceptance suite and demos.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::domain::{
    AuxBoilerParams, BiomassStorageParams, ChpParams, ContractSpec, CostParams, PlantConfig,
    SafetyLevel, Scenario, ScenarioSet, ThermalStorageParams, TimeGrid, HOURS_PER_WEEK,
};
use crate::orchestrator::{Sample, StepError};
use crate::phase1::{ContractPlan, WeekPlan};
use crate::scengen::{Archive, HistoricalYear};

/// A plant a few times smaller than municipality A, with short minimum
/// up/down times so exhaustive enumeration stays cheap.
pub fn toy_plant(weeks: usize) -> PlantConfig {
    PlantConfig {
        name: "toy".into(),
        weeks,
        chp: ChpParams {
            p_max: 2.0,
            p_min: 0.5,
            q_max: 3.0,
            theta: -0.18,
            xi: 0.55,
            ramp_up: 1.0,
            ramp_down: 1.0,
            eff_power: 0.62,
            eff_heat: 0.31,
            min_up: 2,
            min_down: 2,
        },
        aux: AuxBoilerParams {
            q_max: 2.0,
            eff: 0.97,
            om_cost: 0.07,
            tax: 28.22,
            co2_tax: 6.34,
        },
        biomass_storage: BiomassStorageParams {
            cap: 4000.0,
            safety: SafetyLevel::flat(50.0),
            max_outflow: 5.0,
            delivery_gap: 2,
            initial: 100.0,
            calorific: 4.9971,
            inventory_cost: 0.0002,
        },
        thermal_storage: ThermalStorageParams {
            cap_min: 0.0,
            cap_max: 2.0,
            max_flow: 1.0,
            initial: 1.0,
        },
        costs: CostParams {
            chp_op: 19.85,
            startup: 100.0,
            shutdown: 0.0,
            elec_tax: 55.62,
            biomass_incentive: 20.25,
            biomass_share_target: 0.5,
            penalty_store: 1000.0,
            penalty_miss: 10000.0,
            penalty_bm: 5000.0,
        },
    }
}

/// Two weekly-frequency contracts scaled down from the municipality-A
/// offers: a large cheap one with small options and a small one with
/// wide options.
pub fn toy_contracts() -> Vec<ContractSpec> {
    vec![
        ContractSpec {
            id: "A".into(),
            base_price: 181.31,
            up_price: 30.56,
            down_price: 30.56,
            amount_min: 80.0,
            amount_max: 120.0,
            freq: 168,
            deliveries_min: 1,
            deliveries_max: 2,
            opt_up: 0.1,
            opt_down: 0.1,
        },
        ContractSpec {
            id: "B".into(),
            base_price: 202.05,
            up_price: 12.22,
            down_price: 12.22,
            amount_min: 10.0,
            amount_max: 35.0,
            freq: 168,
            deliveries_min: 1,
            deliveries_max: 2,
            opt_up: 0.75,
            opt_down: 0.75,
        },
    ]
}

/// Four weeks, two demand scenarios, flat prices.
pub fn toy_weekly_scenarios() -> ScenarioSet {
    let s = |p: f64, d: [f64; 4]| Scenario {
        probability: p,
        demand: d.to_vec(),
        elec_price: vec![40.0; 4],
        fuel_price: vec![20.0; 4],
    };
    ScenarioSet::new(
        TimeGrid::weekly(4),
        vec![
            s(0.4, [250.0, 300.0, 280.0, 220.0]),
            s(0.6, [300.0, 350.0, 260.0, 240.0]),
        ],
    )
    .expect("valid toy scenarios")
}

/// One six-period week with a single scenario.
pub fn toy_hourly_scenario() -> ScenarioSet {
    ScenarioSet::new(
        TimeGrid::hourly_collapsed(6, 1),
        vec![Scenario {
            probability: 1.0,
            demand: vec![2.0, 2.5, 3.0, 1.0, 0.5, 2.0],
            elec_price: vec![40.0, 60.0, 80.0, 30.0, 20.0, 50.0],
            fuel_price: vec![20.0; 6],
        }],
    )
    .expect("valid toy scenario")
}

/// Shape of a synthetic archive year.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveShape {
    pub weeks: usize,
    /// Mean hourly demand (MWt).
    pub demand_level: f64,
    /// Amplitude of the yearly cosine, as a fraction of `demand_level`.
    pub seasonal: f64,
    /// Amplitude of the daily cycle, as a fraction of `demand_level`.
    pub daily: f64,
    /// Hourly noise standard deviation, as a fraction of `demand_level`.
    pub noise: f64,
    pub price_level: f64,
    pub fuel_price: f64,
}

impl Default for ArchiveShape {
    fn default() -> Self {
        ArchiveShape {
            weeks: 52,
            demand_level: 12.0,
            seasonal: 0.4,
            daily: 0.15,
            noise: 0.05,
            price_level: 40.0,
            fuel_price: 20.0,
        }
    }
}

/// One hourly synthetic year: seasonal and daily cycles plus AR(1) noise.
pub fn synthetic_year(shape: &ArchiveShape, label: &str, seed: u64) -> HistoricalYear {
    let hours = shape.weeks * HOURS_PER_WEEK;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let (mut ed, mut ep) = (0.0, 0.0);
    let mut demand = Vec::with_capacity(hours);
    let mut elec = Vec::with_capacity(hours);
    for h in 0..hours {
        let year = 2.0 * std::f64::consts::PI * h as f64 / (52 * HOURS_PER_WEEK) as f64;
        let day = 2.0 * std::f64::consts::PI * (h % 24) as f64 / 24.0;
        ed = 0.8 * ed + shape.noise * normal.sample(&mut rng);
        ep = 0.8 * ep + 0.05 * normal.sample(&mut rng);
        // heating season peaks mid-year since years run summer to summer
        let season = 1.0 - shape.seasonal * year.cos();
        let d = shape.demand_level * (season + shape.daily * (day - 1.0).sin() + ed);
        demand.push(d.max(0.0));
        elec.push(shape.price_level * (1.0 + 0.2 * (day - 2.0).sin() + ep));
    }
    HistoricalYear {
        label: label.into(),
        demand,
        elec_price: elec,
        fuel_price: vec![shape.fuel_price; hours],
    }
}

/// Five synthetic years labelled `y0`..`y4`, each with its own noise.
pub fn synthetic_archive(shape: &ArchiveShape, seed: u64) -> Archive {
    let years = (0..5)
        .map(|y| synthetic_year(shape, &format!("y{y}"), seed.wrapping_add(y as u64)))
        .collect();
    Archive::new(years).expect("synthetic archive is well-formed")
}

/// Twelve collapsed weeks of steady demand with one week far above it.
#[derive(Debug, Clone)]
pub struct SpikeFixture {
    pub plant: PlantConfig,
    pub contracts: Vec<ContractSpec>,
    pub plan: ContractPlan,
    pub sample: Sample,
    /// 0-based.
    pub spike_week: usize,
}

pub const SPIKE_PERIODS_PER_WEEK: usize = 24;
pub const SPIKE_WEEKS: usize = 12;

/// The toy plant on 24-period weeks buying one delivery of 10 t a week with
/// ±5 t options; demand sits at 1.2 MWt except in week 6, where it nearly
/// reaches the combined CHP and boiler capacity.
pub fn demand_spike_fixture() -> SpikeFixture {
    let ppw = SPIKE_PERIODS_PER_WEEK;
    let spike_week = 5;
    let mut plant = toy_plant(SPIKE_WEEKS);
    plant.biomass_storage.initial = 60.0;
    let contracts = vec![ContractSpec {
        id: "S".into(),
        base_price: 202.05,
        up_price: 12.22,
        down_price: 12.22,
        amount_min: 5.0,
        amount_max: 15.0,
        freq: 20,
        deliveries_min: SPIKE_WEEKS as u32,
        deliveries_max: SPIKE_WEEKS as u32,
        opt_up: 0.75,
        opt_down: 0.75,
    }];
    let mut plan = ContractPlan::empty(&contracts, SPIKE_WEEKS);
    plan.selected[0] = true;
    plan.weeks[0] = vec![
        WeekPlan {
            deliveries: 1,
            amount: 10.0,
            up: 5.0,
            down: 5.0,
        };
        SPIKE_WEEKS
    ];
    let n = SPIKE_WEEKS * ppw;
    let cycle = |t: usize, phase: f64| {
        (2.0 * std::f64::consts::PI * (t % ppw) as f64 / ppw as f64 + phase).sin()
    };
    let demand = (0..n)
        .map(|t| {
            if t / ppw == spike_week {
                4.6 + 0.2 * cycle(t, 0.0)
            } else {
                1.2 + 0.3 * cycle(t, 0.0)
            }
        })
        .collect();
    let price = (0..n).map(|t| 40.0 + 10.0 * cycle(t, 1.0)).collect();
    let sample =
        Sample::new("spike", ppw, demand, price, vec![20.0; n]).expect("valid spike sample");
    SpikeFixture {
        plant,
        contracts,
        plan,
        sample,
        spike_week,
    }
}

/// Two forecasts of the sample window, 7 % below and above the realized
/// demand, at equal probability.
pub fn spike_forecast(
    start_week: usize,
    n_weeks: usize,
    sample: &Sample,
    _seed: u64,
) -> Result<ScenarioSet, StepError> {
    let ppw = sample.periods_per_week;
    let r = start_week * ppw..(start_week + n_weeks) * ppw;
    let s = |f: f64| Scenario {
        probability: 0.5,
        demand: sample.demand[r.clone()].iter().map(|d| f * d).collect(),
        elec_price: sample.elec_price[r.clone()].to_vec(),
        fuel_price: sample.fuel_price[r.clone()].to_vec(),
    };
    Ok(ScenarioSet::new(
        TimeGrid::hourly_collapsed(ppw, n_weeks),
        vec![s(0.93), s(1.07)],
    )?)
}
