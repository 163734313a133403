use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use super::{expand_daily_to_hourly, DomainError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStep {
    Hourly,
    Daily,
}

impl SeriesStep {
    fn delta(self) -> chrono::TimeDelta {
        match self {
            SeriesStep::Hourly => chrono::TimeDelta::hours(1),
            SeriesStep::Daily => chrono::TimeDelta::days(1),
        }
    }
}

/// A regularly spaced series read from a `timestamp,value` CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub start: NaiveDateTime,
    pub step: SeriesStep,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn hourly(start: NaiveDateTime, values: Vec<f64>) -> Self {
        TimeSeries {
            start,
            step: SeriesStep::Hourly,
            values,
        }
    }

    /// Hourly values; daily series are repeated over their 24 hours.
    pub fn to_hourly(&self) -> Vec<f64> {
        match self.step {
            SeriesStep::Hourly => self.values.clone(),
            SeriesStep::Daily => expand_daily_to_hourly(&self.values),
        }
    }
}

fn parse_timestamp(raw: &str) -> Option<NaiveDateTime> {
    let raw = raw.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.naive_utc());
    }
    for fmt in [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(dt);
        }
    }
    NaiveDate::parse_from_str(raw, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
}

/// Reads a `timestamp,value` file with hourly (or daily) ISO-8601 stamps.
pub fn read_series(path: &Path) -> Result<TimeSeries> {
    let shown = path.display().to_string();
    let mut reader = csv::Reader::from_path(path).map_err(|source| DomainError::Csv {
        path: shown.clone(),
        source,
    })?;
    let headers = reader
        .headers()
        .map_err(|source| DomainError::Csv {
            path: shown.clone(),
            source,
        })?
        .clone();
    if headers.len() != 2 || &headers[0] != "timestamp" || &headers[1] != "value" {
        return Err(DomainError::Parse {
            path: shown,
            message: "expected header `timestamp,value`".into(),
        });
    }

    let mut stamps = Vec::new();
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| DomainError::Csv {
            path: shown.clone(),
            source,
        })?;
        let line = i + 2;
        let stamp = parse_timestamp(&record[0]).ok_or_else(|| DomainError::Parse {
            path: format!("{shown}:{line}"),
            message: format!("bad timestamp `{}`", &record[0]),
        })?;
        let value: f64 = record[1].trim().parse().map_err(|_| DomainError::Parse {
            path: format!("{shown}:{line}"),
            message: format!("missing or non-numeric value `{}`", &record[1]),
        })?;
        if !value.is_finite() {
            return Err(DomainError::Parse {
                path: format!("{shown}:{line}"),
                message: "value is not finite".into(),
            });
        }
        stamps.push(stamp);
        values.push(value);
    }
    if stamps.is_empty() {
        return Err(DomainError::Series(format!("{shown}: no rows")));
    }

    let step = match stamps.get(1).map(|&s| s - stamps[0]) {
        Some(d) if d == chrono::TimeDelta::days(1) => SeriesStep::Daily,
        _ => SeriesStep::Hourly,
    };
    for (i, pair) in stamps.windows(2).enumerate() {
        if pair[1] - pair[0] != step.delta() {
            return Err(DomainError::Series(format!(
                "{shown}: irregular spacing between rows {} and {}",
                i + 2,
                i + 3
            )));
        }
    }
    Ok(TimeSeries {
        start: stamps[0],
        step,
        values,
    })
}

pub fn write_series(path: &Path, series: &TimeSeries) -> Result<()> {
    let shown = path.display().to_string();
    let csv_err = |source| DomainError::Csv {
        path: shown.clone(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["timestamp", "value"]).map_err(csv_err)?;
    let mut stamp = series.start;
    for v in &series.values {
        w.write_record([stamp.format("%Y-%m-%dT%H:%M:%S").to_string(), v.to_string()])
            .map_err(csv_err)?;
        stamp += series.step.delta();
    }
    w.flush().map_err(|source| DomainError::Io {
        path: shown.clone(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_hourly() {
        let f = file("timestamp,value\n2016-06-01T00:00:00,1.5\n2016-06-01T01:00:00,2\n");
        let s = read_series(f.path()).unwrap();
        assert_eq!(s.step, SeriesStep::Hourly);
        assert_eq!(s.values, vec![1.5, 2.0]);
    }

    #[test]
    fn daily_series_expand() {
        let f = file("timestamp,value\n2016-06-01,20\n2016-06-02,21\n");
        let s = read_series(f.path()).unwrap();
        assert_eq!(s.step, SeriesStep::Daily);
        let h = s.to_hourly();
        assert_eq!(h.len(), 48);
        assert_eq!(h[30], 21.0);
    }

    #[test]
    fn gaps_and_missing_values_rejected() {
        let gap = file("timestamp,value\n2016-06-01T00:00:00,1\n2016-06-01T02:00:00,2\n");
        assert!(read_series(gap.path()).is_err());
        let missing = file("timestamp,value\n2016-06-01T00:00:00,\n");
        assert!(read_series(missing.path()).is_err());
        let header = file("time,v\n2016-06-01T00:00:00,1\n");
        assert!(read_series(header.path()).is_err());
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let start = parse_timestamp("2016-06-01T00:00:00").unwrap();
        let s = TimeSeries::hourly(start, vec![0.1, 0.2, 1e-7]);
        write_series(&path, &s).unwrap();
        assert_eq!(read_series(&path).unwrap(), s);
    }
}
