use super::{
    AuxBoilerParams, CostParams, DomainError, Resolution, Result, ScenarioSet, HOURS_PER_WEEK,
};

/// Incentive for the week with the widest demand spread.
pub const INCENTIVE_MAX: f64 = 5.2;
/// Floor of the incentive ladder.
pub const INCENTIVE_MIN: f64 = 0.1;
/// Decrement per rank.
pub const INCENTIVE_STEP: f64 = 0.1;

/// Net electricity cost (negative means profit) and auxiliary boiler cost
/// per period.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSeries {
    pub net_elec: Vec<f64>,
    pub aux: Vec<f64>,
}

/// `net_elec = elec_tax - incentive - price` and
/// `aux = fuel + om + tax + co2`, element-wise.
pub fn derive_cost_series(
    elec_price: &[f64],
    fuel_price: &[f64],
    costs: &CostParams,
    aux: &AuxBoilerParams,
) -> Result<CostSeries> {
    if elec_price.is_empty() || fuel_price.is_empty() {
        return Err(DomainError::Series("price series must be non-empty".into()));
    }
    if elec_price.len() != fuel_price.len() {
        return Err(DomainError::UnitMismatch(format!(
            "electricity series has {} values, fuel series {}",
            elec_price.len(),
            fuel_price.len()
        )));
    }
    let net_elec = elec_price
        .iter()
        .map(|&price| costs.elec_tax - costs.biomass_incentive - price)
        .collect();
    let aux_add = aux.om_cost + aux.tax + aux.co2_tax;
    let aux = fuel_price.iter().map(|&fuel| fuel + aux_add).collect();
    Ok(CostSeries { net_elec, aux })
}

/// Per-week option incentive from the spread of weekly demand across
/// scenarios.
///
/// Weeks are ranked by descending `max - min` demand (ties keep the earlier
/// week first); rank `r` (1-based) gets `5.2 - 0.1 (r - 1)`, never below 0.1.
pub fn incentive_schedule(scenarios: &ScenarioSet) -> Result<Vec<f64>> {
    if scenarios.grid().resolution() != Resolution::Weekly {
        return Err(DomainError::UnitMismatch(
            "incentive schedule needs weekly scenarios".into(),
        ));
    }
    let n = scenarios.grid().n_periods();
    let spread: Vec<f64> = (0..n)
        .map(|t| {
            let (lo, hi) = scenarios
                .scenarios()
                .iter()
                .map(|s| s.demand[t])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                    (lo.min(d), hi.max(d))
                });
            hi - lo
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps earlier weeks first among equal spreads
    order.sort_by(|&a, &b| spread[b].total_cmp(&spread[a]));
    let mut psi = vec![0.0; n];
    for (rank, &week) in order.iter().enumerate() {
        // integer tenths avoid accumulating 0.1 steps
        let tenths = (52_i64 - rank as i64).max(1);
        psi[week] = tenths as f64 / 10.0;
    }
    debug_assert!(psi
        .iter()
        .all(|&v| (INCENTIVE_MIN..=INCENTIVE_MAX).contains(&v)));
    Ok(psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateKind {
    /// Summed per week.
    Demand,
    /// Averaged per week.
    Price,
}

/// Collapses an hourly series into weekly values.
pub fn aggregate_to_weekly(hourly: &[f64], kind: AggregateKind) -> Result<Vec<f64>> {
    if !hourly.len().is_multiple_of(HOURS_PER_WEEK) {
        return Err(DomainError::Series(format!(
            "{} hourly values is not a whole number of weeks",
            hourly.len()
        )));
    }
    Ok(hourly
        .chunks(HOURS_PER_WEEK)
        .map(|week| {
            let sum: f64 = week.iter().sum();
            match kind {
                AggregateKind::Demand => sum,
                AggregateKind::Price => sum / HOURS_PER_WEEK as f64,
            }
        })
        .collect())
}

/// Drops hours past the end of a `weeks`-week year.
pub fn trim_to_year(hourly: &[f64], weeks: usize) -> Result<&[f64]> {
    let hours = weeks * HOURS_PER_WEEK;
    if hourly.len() < hours {
        return Err(DomainError::Series(format!(
            "{} hourly values, a {weeks}-week year needs {hours}",
            hourly.len()
        )));
    }
    Ok(&hourly[..hours])
}

/// Repeats each daily value for its 24 hours.
pub fn expand_daily_to_hourly(daily: &[f64]) -> Vec<f64> {
    daily
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, 24))
        .collect()
}
