use bioplan::domain::{ContractSpec, SafetyLevel, ScenarioSet, HOURS_PER_WEEK};
use bioplan::orchestrator::{
    evaluate_plan, run_contract_phase, run_expected_value_baseline, run_receding_year,
    solve_contract_phase, value_of_stochastic_solution, ArchiveSource, ContractInputs, FnSource,
    RunOptions, Sample, ScenarioSource, StepError, YearResult,
};
use bioplan::phase1::ContractPlan;
use bioplan::scengen::{Archive, HistoricalYear, Method};
use bioplan::synthetic::{
    demand_spike_fixture, synthetic_archive, toy_contracts, toy_plant, toy_weekly_scenarios,
    ArchiveShape, SpikeFixture,
};
use bioplan::SolverBackend;

fn backend() -> SolverBackend {
    SolverBackend::from_env().with_gap(1e-6)
}

fn flat_archive(weeks: usize, demand: f64) -> Archive {
    let hours = weeks * HOURS_PER_WEEK;
    let year = |y: usize| HistoricalYear {
        label: format!("y{y}"),
        demand: vec![demand; hours],
        elec_price: vec![40.0; hours],
        fuel_price: vec![20.0; hours],
    };
    Archive::new((0..5).map(year).collect()).unwrap()
}

#[test]
fn zero_demand_archive_gives_an_empty_plan() {
    let mut plant = toy_plant(4);
    plant.biomass_storage.safety = SafetyLevel::flat(0.0);
    let phase = run_contract_phase(
        &backend(),
        &plant,
        &toy_contracts(),
        &flat_archive(4, 0.0),
        None,
    )
    .unwrap();
    assert!(phase.plan.selected.iter().all(|&u| !u));
    assert!(phase.plan.weeks.iter().flatten().all(|r| r.is_empty()));
    assert!(phase.max_violation <= 1e-6);
}

#[test]
fn flat_archive_selects_the_contract_that_covers_the_chp() {
    let mut plant = toy_plant(4);
    plant.biomass_storage.initial = 0.0;
    plant.biomass_storage.safety = SafetyLevel::flat(0.0);
    plant.biomass_storage.inventory_cost = 0.0;
    plant.aux.q_max = 0.2;
    let chp = plant.chp.clone();
    let e_b = plant.biomass_storage.calorific;

    // cheapest fuel per MWh of CHP heat runs at p = ξ q
    let fuel_per_heat = chp.xi / chp.eff_power - chp.theta / chp.eff_heat;
    let tonnes = 20.0;
    let chp_heat = tonnes * e_b / fuel_per_heat;
    let aux_heat = plant.aux.q_max * HOURS_PER_WEEK as f64;
    let weekly = chp_heat + aux_heat;
    let contract = ContractSpec {
        id: "F".into(),
        base_price: 202.05,
        up_price: 0.0,
        down_price: 0.0,
        amount_min: tonnes,
        amount_max: tonnes,
        freq: 168,
        deliveries_min: 4,
        deliveries_max: 4,
        opt_up: 0.0,
        opt_down: 0.0,
    };
    let archive = flat_archive(4, weekly / HOURS_PER_WEEK as f64);
    let phase = run_contract_phase(
        &backend(),
        &plant,
        std::slice::from_ref(&contract),
        &archive,
        None,
    )
    .unwrap();
    assert!(phase.plan.selected[0]);
    for r in &phase.plan.weeks[0] {
        assert_eq!(r.deliveries, 1);
        assert!((r.amount - tonnes).abs() < 1e-6);
    }

    let pc = &plant.costs;
    let c_aux = 20.0 + plant.aux.om_cost + plant.aux.tax + plant.aux.co2_tax;
    let net_elec = pc.elec_tax - pc.biomass_incentive - 40.0;
    let power = chp.xi * chp_heat;
    let week = contract.base_price * tonnes
        + c_aux / plant.aux.eff * aux_heat
        + (pc.chp_op + net_elec) * power
        - pc.chp_op * chp.theta * chp_heat;
    let expected = 4.0 * week;
    assert!(
        (phase.objective - expected).abs() <= 1e-6 * expected,
        "{} vs {expected}",
        phase.objective
    );
}

#[test]
fn contract_phase_on_a_synthetic_archive_respects_the_terms() {
    let shape = ArchiveShape {
        weeks: 8,
        demand_level: 1.8,
        ..ArchiveShape::default()
    };
    let plant = toy_plant(8);
    let contracts = toy_contracts();
    let phase = run_contract_phase(
        &backend(),
        &plant,
        &contracts,
        &synthetic_archive(&shape, 4),
        None,
    )
    .unwrap();
    phase.plan.validate(&contracts).unwrap();
    assert!(phase.plan.selected.iter().any(|&u| u));
    assert!(phase.max_violation <= 1e-6);
}

#[test]
fn identical_years_make_expected_value_and_stochastic_plans_coincide() {
    let shape = ArchiveShape {
        weeks: 4,
        demand_level: 1.8,
        ..ArchiveShape::default()
    };
    let year = synthetic_archive(&shape, 9).years()[0].clone();
    let archive = Archive::new(vec![year; 5]).unwrap();
    let plant = toy_plant(4);
    let contracts = toy_contracts();
    let inputs = ContractInputs::from_archive(&archive, 4).unwrap();
    let sto = solve_contract_phase(&backend(), &plant, &contracts, &inputs, None).unwrap();
    let ev = solve_contract_phase(
        &backend(),
        &plant,
        &contracts,
        &inputs.expected_value(),
        None,
    )
    .unwrap();
    assert!((sto.objective - ev.objective).abs() <= 1e-6 * sto.objective.abs());
    // the same plan priced on either set costs the same
    let (cost, _) = evaluate_plan(&backend(), &plant, &contracts, &inputs, &ev.plan).unwrap();
    assert!((cost - sto.objective).abs() <= 1e-6 * sto.objective.abs());
}

#[test]
fn stochastic_plan_is_never_worse_in_sample() {
    let plant = toy_plant(4);
    let inputs = ContractInputs::from_scenarios(toy_weekly_scenarios()).unwrap();
    let v = value_of_stochastic_solution(&backend(), &plant, &toy_contracts(), &inputs).unwrap();
    assert!(
        v.value() >= -1e-4 * v.stochastic.objective.abs(),
        "VSS {}",
        v.value()
    );
    assert!(v.expected_value_violation <= 1e-6);
    for r in v.expected_value.plan.weeks.iter().flatten() {
        assert_eq!((r.up, r.down), (0.0, 0.0));
    }
}

fn exact_source(
    start: usize,
    n: usize,
    sample: &Sample,
    _seed: u64,
) -> Result<ScenarioSet, StepError> {
    let ppw = sample.periods_per_week;
    let r = start * ppw..(start + n) * ppw;
    Ok(ScenarioSet::new(
        bioplan::TimeGrid::hourly_collapsed(ppw, n),
        vec![bioplan::Scenario {
            probability: 1.0,
            demand: sample.demand[r.clone()].to_vec(),
            elec_price: sample.elec_price[r.clone()].to_vec(),
            fuel_price: sample.fuel_price[r].to_vec(),
        }],
    )?)
}

fn short_spike(weeks: usize) -> SpikeFixture {
    let mut f = demand_spike_fixture();
    f.plan = ContractPlan {
        contract_ids: f.plan.contract_ids.clone(),
        selected: f.plan.selected.clone(),
        weeks: f.plan.weeks.iter().map(|w| w[..weeks].to_vec()).collect(),
    };
    f.contracts[0].deliveries_min = weeks as u32;
    f.contracts[0].deliveries_max = weeks as u32;
    f.plant.weeks = weeks;
    f
}

fn assert_year_invariants(r: &YearResult, plan_weeks: usize) {
    assert_eq!(r.weekly.len(), plan_weeks);
    assert!(r.check().is_empty(), "{:?}", r.check());
    for w in &r.weekly {
        assert!(
            w.max_violation <= 1e-6,
            "week {}: {}",
            w.week + 1,
            w.max_violation
        );
    }
}

#[test]
fn perfect_forecast_with_one_week_horizon_realizes_the_plan() {
    let f = short_spike(3);
    let src = FnSource::new("exact", exact_source);
    let r = run_receding_year(
        &backend(),
        &f.plant,
        &f.contracts,
        &f.plan,
        &f.sample,
        &src,
        &RunOptions::new(1, 0),
    )
    .unwrap();
    assert_year_invariants(&r, 3);
    for (w, planned) in r.weekly.iter().zip(&r.planned) {
        assert!(
            (w.total - planned).abs() <= 1e-5 * planned.abs().max(1.0),
            "week {}: {} vs {planned}",
            w.week + 1,
            w.total
        );
    }
}

#[test]
fn identical_inputs_give_identical_years() {
    let f = short_spike(3);
    let src = FnSource::new("spike", bioplan::synthetic::spike_forecast);
    let run = || {
        run_receding_year(
            &backend(),
            &f.plant,
            &f.contracts,
            &f.plan,
            &f.sample,
            &src,
            &RunOptions::new(2, 11),
        )
        .unwrap()
    };
    let a = run();
    assert_year_invariants(&a, 3);
    assert_eq!(a, run());
    assert_eq!(a.meta.method, "spike");
    assert_eq!(a.meta.horizon, 2);
    assert_eq!(
        a.weekly[0].start_state.biomass_level,
        f.plant.biomass_storage.initial
    );
}

#[test]
fn too_short_sample_and_zero_horizon_are_rejected() {
    let f = short_spike(3);
    let src = FnSource::new("exact", exact_source);
    let mut short = f.sample.clone();
    short.demand.truncate(2 * short.periods_per_week);
    short.elec_price.truncate(2 * short.periods_per_week);
    short.fuel_price.truncate(2 * short.periods_per_week);
    let b = backend();
    assert!(run_receding_year(
        &b,
        &f.plant,
        &f.contracts,
        &f.plan,
        &short,
        &src,
        &RunOptions::new(1, 0)
    )
    .is_err());
    assert!(run_receding_year(
        &b,
        &f.plant,
        &f.contracts,
        &f.plan,
        &f.sample,
        &src,
        &RunOptions::new(0, 0)
    )
    .is_err());
}

#[test]
fn archive_scenarios_ignore_future_observations() {
    let shape = ArchiveShape {
        weeks: 10,
        demand_level: 1.8,
        ..ArchiveShape::default()
    };
    let archive = synthetic_archive(&shape, 5);
    let mut src = ArchiveSource::new(&archive, Method::F1);
    src.config.n_paths = 40;
    let sample = Sample::from_year(&synthetic_archive(&shape, 99).years()[0]).unwrap();
    let mut altered = sample.clone();
    for d in &mut altered.demand[3 * HOURS_PER_WEEK..] {
        *d += 5.0;
    }
    let a = src.scenarios(3, 2, &sample, 7).unwrap();
    assert_eq!(a, src.scenarios(3, 2, &altered, 7).unwrap());
    assert_ne!(a, src.scenarios(4, 2, &altered, 7).unwrap());
    assert_eq!(a.len(), 5);
    assert_eq!(src.label(), "F1");
}

#[test]
fn expected_value_baseline_keeps_year_invariants() {
    let shape = ArchiveShape {
        weeks: 2,
        demand_level: 1.8,
        ..ArchiveShape::default()
    };
    let archive = synthetic_archive(&shape, 21);
    let mut plant = toy_plant(2);
    plant.biomass_storage.initial = 600.0;
    let sample = Sample::from_year(&synthetic_archive(&shape, 77).years()[2]).unwrap();
    let (phase, year) = run_expected_value_baseline(
        &backend(),
        &plant,
        &toy_contracts(),
        &archive,
        &sample,
        &RunOptions::new(1, 3),
    )
    .unwrap();
    for r in phase.plan.weeks.iter().flatten() {
        assert_eq!((r.up, r.down), (0.0, 0.0));
    }
    assert_year_invariants(&year, 2);
    assert_eq!(year.meta.method, "EV");
    assert_eq!(year.meta.sample, "y2");
}
