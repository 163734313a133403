use std::path::Path;

use super::{Result, ScenGenError};
use chrono::{NaiveDate, NaiveDateTime};

use crate::domain::{
    aggregate_to_weekly, read_series, trim_to_year, write_series, AggregateKind, Resolution,
    Scenario, ScenarioSet, TimeGrid, TimeSeries, HOURS_PER_WEEK,
};

/// Weights of the five archive years, oldest first.
pub const YEAR_PROBABILITIES: [f64; 5] = [0.15, 0.15, 0.15, 0.275, 0.275];

/// Hourly demand and prices of one year (summer to summer).
#[derive(Debug, Clone, PartialEq)]
pub struct HistoricalYear {
    pub label: String,
    pub demand: Vec<f64>,
    pub elec_price: Vec<f64>,
    pub fuel_price: Vec<f64>,
}

impl HistoricalYear {
    /// Reads `demand{suffix}.csv`, `elec_price{suffix}.csv` and
    /// `fuel_price{suffix}.csv` from `dir`, trimmed to `weeks` weeks.
    pub fn load(dir: &Path, suffix: &str, label: &str, weeks: usize) -> Result<Self> {
        let read = |q: &str| -> Result<Vec<f64>> {
            let s = read_series(&dir.join(format!("{q}{suffix}.csv")))?;
            Ok(trim_to_year(&s.to_hourly(), weeks)?.to_vec())
        };
        Ok(HistoricalYear {
            label: label.to_string(),
            demand: read("demand")?,
            elec_price: read("elec_price")?,
            fuel_price: read("fuel_price")?,
        })
    }

    /// Writes the three series as `{quantity}{suffix}.csv` in `dir`, hourly
    /// from `start`.
    pub fn write(&self, dir: &Path, suffix: &str, start: NaiveDateTime) -> Result<()> {
        for (q, values) in [
            ("demand", &self.demand),
            ("elec_price", &self.elec_price),
            ("fuel_price", &self.fuel_price),
        ] {
            let series = TimeSeries::hourly(start, values.clone());
            write_series(&dir.join(format!("{q}{suffix}.csv")), &series)?;
        }
        Ok(())
    }

    pub fn hours(&self) -> usize {
        self.demand.len()
    }

    /// Hours `[start, start + len)`, wrapping to the start of the same year.
    pub fn window(series: &[f64], start: usize, len: usize) -> Vec<f64> {
        (start..start + len)
            .map(|h| series[h % series.len()])
            .collect()
    }
}

/// Five consecutive historical years, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Archive {
    years: Vec<HistoricalYear>,
    weeks: usize,
}

impl Archive {
    pub fn new(years: Vec<HistoricalYear>) -> Result<Self> {
        if years.len() != YEAR_PROBABILITIES.len() {
            return Err(ScenGenError::Archive(format!(
                "need {} historical years, got {}",
                YEAR_PROBABILITIES.len(),
                years.len()
            )));
        }
        let hours = years[0].hours();
        if hours == 0 || !hours.is_multiple_of(HOURS_PER_WEEK) {
            return Err(ScenGenError::Archive(format!(
                "{hours} hours is not a whole number of weeks"
            )));
        }
        for y in &years {
            if [y.demand.len(), y.elec_price.len(), y.fuel_price.len()] != [hours; 3] {
                return Err(ScenGenError::Archive(format!(
                    "year {} does not have {hours} hours in every series",
                    y.label
                )));
            }
        }
        Ok(Archive {
            weeks: hours / HOURS_PER_WEEK,
            years,
        })
    }

    /// Loads `{demand,elec_price,fuel_price}_{year}.csv` for every year
    /// found in `dir`; the five most recent years are kept.
    pub fn load(dir: &Path, weeks: usize) -> Result<Self> {
        let mut labels = Vec::new();
        let entries = std::fs::read_dir(dir)
            .map_err(|e| ScenGenError::Archive(format!("{}: {e}", dir.display())))?;
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(label) = name
                .strip_prefix("demand_")
                .and_then(|r| r.strip_suffix(".csv"))
            {
                labels.push(label.to_string());
            }
        }
        labels.sort();
        if labels.len() < YEAR_PROBABILITIES.len() {
            return Err(ScenGenError::Archive(format!(
                "{} holds {} demand years, need {}",
                dir.display(),
                labels.len(),
                YEAR_PROBABILITIES.len()
            )));
        }
        let keep = &labels[labels.len() - YEAR_PROBABILITIES.len()..];
        let years = keep
            .iter()
            .map(|l| HistoricalYear::load(dir, &format!("_{l}"), l, weeks))
            .collect::<Result<Vec<_>>>()?;
        Archive::new(years)
    }

    /// Writes every year as `{quantity}_{label}.csv`, the layout
    /// [`Archive::load`] reads; year `i` starts on 1 July of `first_year + i`.
    pub fn write(&self, dir: &Path, first_year: i32) -> Result<()> {
        for (i, y) in self.years.iter().enumerate() {
            let start = NaiveDate::from_ymd_opt(first_year + i as i32, 7, 1)
                .and_then(|d| d.and_hms_opt(0, 0, 0))
                .ok_or_else(|| ScenGenError::Archive(format!("bad start year {first_year}")))?;
            y.write(dir, &format!("_{}", y.label), start)?;
        }
        Ok(())
    }

    pub fn years(&self) -> &[HistoricalYear] {
        &self.years
    }

    pub fn newest(&self) -> &HistoricalYear {
        self.years.last().expect("archive is non-empty")
    }

    pub fn weeks(&self) -> usize {
        self.weeks
    }

    /// Probability-weighted fuel price over the window.
    pub fn expected_fuel(&self, start_week: usize, n_weeks: usize) -> Vec<f64> {
        let (start, len) = (start_week * HOURS_PER_WEEK, n_weeks * HOURS_PER_WEEK);
        let mut out = vec![0.0; len];
        for (y, p) in self.years.iter().zip(YEAR_PROBABILITIES) {
            for (o, v) in out
                .iter_mut()
                .zip(HistoricalYear::window(&y.fuel_price, start, len))
            {
                *o += p * v;
            }
        }
        out
    }
}

/// One scenario per archive year over weeks `start_week..start_week+n_weeks`
/// (0-based), at weekly or hourly resolution.
pub fn historical_scenarios(
    archive: &Archive,
    start_week: usize,
    n_weeks: usize,
    resolution: Resolution,
) -> Result<ScenarioSet> {
    if n_weeks == 0 || n_weeks > archive.weeks() {
        return Err(ScenGenError::Archive(format!(
            "window of {n_weeks} weeks does not fit a {}-week archive",
            archive.weeks()
        )));
    }
    let (start, len) = (start_week * HOURS_PER_WEEK, n_weeks * HOURS_PER_WEEK);
    let mut scenarios = Vec::with_capacity(archive.years().len());
    for (y, p) in archive.years().iter().zip(YEAR_PROBABILITIES) {
        let demand = HistoricalYear::window(&y.demand, start, len);
        let elec = HistoricalYear::window(&y.elec_price, start, len);
        let fuel = HistoricalYear::window(&y.fuel_price, start, len);
        scenarios.push(match resolution {
            Resolution::Hourly => Scenario {
                probability: p,
                demand,
                elec_price: elec,
                fuel_price: fuel,
            },
            Resolution::Weekly => Scenario {
                probability: p,
                demand: aggregate_to_weekly(&demand, AggregateKind::Demand)?,
                elec_price: aggregate_to_weekly(&elec, AggregateKind::Price)?,
                fuel_price: aggregate_to_weekly(&fuel, AggregateKind::Price)?,
            },
        });
    }
    let grid = match resolution {
        Resolution::Hourly => TimeGrid::hourly(n_weeks),
        Resolution::Weekly => TimeGrid::weekly(n_weeks),
    };
    Ok(ScenarioSet::new(grid, scenarios)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Year `y` stores `100000 y + hour` so every value names its origin.
    pub(crate) fn labeled(weeks: usize) -> Archive {
        let hours = weeks * HOURS_PER_WEEK;
        Archive::new(
            (0..5)
                .map(|y| HistoricalYear {
                    label: format!("{}", 2011 + y),
                    demand: (0..hours).map(|h| (100_000 * y + h) as f64).collect(),
                    elec_price: vec![30.0 + y as f64; hours],
                    fuel_price: vec![20.0; hours],
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn write_then_load_round_trips() {
        let a = labeled(1);
        let dir = tempfile::tempdir().unwrap();
        a.write(dir.path(), 2011).unwrap();
        assert_eq!(Archive::load(dir.path(), 1).unwrap(), a);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let s = historical_scenarios(&labeled(4), 0, 4, Resolution::Weekly).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(s.probabilities(), YEAR_PROBABILITIES.to_vec());
    }

    #[test]
    fn identical_years_give_identical_scenarios() {
        let mut a = labeled(2);
        let first = a.years[0].clone();
        for y in &mut a.years {
            y.demand = first.demand.clone();
            y.elec_price = first.elec_price.clone();
        }
        let s = historical_scenarios(&a, 0, 2, Resolution::Hourly).unwrap();
        assert!(s.scenarios().windows(2).all(|w| w[0].demand == w[1].demand));
    }

    #[test]
    fn window_across_year_end_wraps_within_each_year() {
        let a = labeled(4);
        let s = historical_scenarios(&a, 3, 2, Resolution::Hourly).unwrap();
        for (y, sc) in s.scenarios().iter().enumerate() {
            let base = (100_000 * y) as f64;
            assert_eq!(sc.demand[0], base + (3 * 168) as f64);
            assert_eq!(sc.demand[167], base + (4 * 168 - 1) as f64);
            assert_eq!(sc.demand[168], base);
        }
    }

    #[test]
    fn weekly_window_aggregates() {
        let s = historical_scenarios(&labeled(2), 1, 1, Resolution::Weekly).unwrap();
        let expected: f64 = (168..336).map(|h| h as f64).sum();
        assert_eq!(s.scenarios()[0].demand, vec![expected]);
    }

    #[test]
    fn needs_five_years() {
        let mut a = labeled(1).years;
        a.pop();
        assert!(Archive::new(a).is_err());
    }
}
