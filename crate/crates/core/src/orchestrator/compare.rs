use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{OrchestratorError, Result, YearResult};

/// Sample id of the rows averaging over all samples.
pub const AGGREGATE_SAMPLE: &str = "average";

/// Totals of one method on one sample over its horizons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub sample: String,
    pub method: String,
    pub runs: usize,
    pub min: f64,
    pub max: f64,
    pub avg: f64,
    /// `(baseline - this) / baseline` in percent; `None` on baseline rows.
    pub delta_min_pct: Option<f64>,
    pub delta_max_pct: Option<f64>,
    pub delta_avg_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub baseline: String,
    /// Sorted by sample then method, aggregate rows last.
    pub rows: Vec<ComparisonRow>,
}

fn pct(base: f64, x: f64) -> f64 {
    if base == x {
        0.0
    } else {
        100.0 * (base - x) / base
    }
}

fn with_deltas(mut rows: Vec<ComparisonRow>, baseline: &str) -> Vec<ComparisonRow> {
    let base = rows
        .iter()
        .find(|r| r.method == baseline)
        .map(|r| (r.min, r.max, r.avg));
    if let Some((bmin, bmax, bavg)) = base {
        for r in rows.iter_mut().filter(|r| r.method != baseline) {
            r.delta_min_pct = Some(pct(bmin, r.min));
            r.delta_max_pct = Some(pct(bmax, r.max));
            r.delta_avg_pct = Some(pct(bavg, r.avg));
        }
    }
    rows
}

/// Min/max/average totals per sample and method, with percentage gaps to
/// the `baseline` method, plus one aggregate block averaging the samples.
pub fn compare_runs(results: &[YearResult], baseline: &str) -> Result<Comparison> {
    if results.len() < 2 {
        return Err(OrchestratorError::Input(
            "comparison needs at least two results".into(),
        ));
    }
    let mut groups: BTreeMap<String, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for r in results {
        groups
            .entry(r.meta.method.clone())
            .or_default()
            .entry(r.meta.sample.clone())
            .or_default()
            .push(r.total);
    }
    if !groups.contains_key(baseline) {
        return Err(OrchestratorError::Input(format!(
            "baseline method {baseline} has no results"
        )));
    }
    let samples: BTreeSet<&String> = groups[baseline].keys().collect();
    for (m, by_sample) in &groups {
        let mine: BTreeSet<&String> = by_sample.keys().collect();
        if mine != samples {
            return Err(OrchestratorError::MismatchedSamples(format!(
                "{m} covers {mine:?}, {baseline} covers {samples:?}"
            )));
        }
    }

    let mut rows = Vec::new();
    for &s in &samples {
        let block = groups
            .iter()
            .map(|(m, by_sample)| {
                let t = &by_sample[s];
                ComparisonRow {
                    sample: s.clone(),
                    method: m.clone(),
                    runs: t.len(),
                    min: t.iter().copied().fold(f64::INFINITY, f64::min),
                    max: t.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    avg: t.iter().sum::<f64>() / t.len() as f64,
                    delta_min_pct: None,
                    delta_max_pct: None,
                    delta_avg_pct: None,
                }
            })
            .collect();
        rows.extend(with_deltas(block, baseline));
    }

    let n = samples.len() as f64;
    let aggregate = groups
        .keys()
        .map(|m| {
            let mine: Vec<&ComparisonRow> = rows.iter().filter(|r| &r.method == m).collect();
            let mean = |f: fn(&ComparisonRow) -> f64| mine.iter().map(|r| f(r)).sum::<f64>() / n;
            ComparisonRow {
                sample: AGGREGATE_SAMPLE.into(),
                method: m.clone(),
                runs: mine.iter().map(|r| r.runs).sum(),
                min: mean(|r| r.min),
                max: mean(|r| r.max),
                avg: mean(|r| r.avg),
                delta_min_pct: None,
                delta_max_pct: None,
                delta_avg_pct: None,
            }
        })
        .collect();
    rows.extend(with_deltas(aggregate, baseline));
    Ok(Comparison {
        baseline: baseline.to_string(),
        rows,
    })
}
