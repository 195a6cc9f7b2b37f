//! Monthly time series: loading, validation, summary statistics, lag embedding,
//! chronological splitting and synthetic fixtures.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Calendar month, the only time unit the crate understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    pub year: i32,
    pub month: u32,
}

impl YearMonth {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::invalid(format!("month {month} out of range 1..=12")));
        }
        Ok(YearMonth { year, month })
    }

    /// The month `n` steps after this one (negative `n` goes backwards).
    pub fn plus_months(&self, n: i64) -> YearMonth {
        let total = self.year as i64 * 12 + (self.month as i64 - 1) + n;
        YearMonth {
            year: total.div_euclid(12) as i32,
            month: (total.rem_euclid(12) + 1) as u32,
        }
    }

    /// Signed number of months from `other` to `self`.
    pub fn months_since(&self, other: &YearMonth) -> i64 {
        (self.year as i64 * 12 + self.month as i64) - (other.year as i64 * 12 + other.month as i64)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (y, m) = text
            .split_once('-')
            .ok_or_else(|| Error::invalid(format!("expected YYYY-MM, got `{text}`")))?;
        let year: i32 = y
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad year in `{text}`")))?;
        let month: u32 = m
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad month in `{text}`")))?;
        YearMonth::new(year, month)
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Column names expected in an input CSV.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub date_col: String,
    pub value_col: String,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            date_col: "date".into(),
            value_col: "fire_spots".into(),
        }
    }
}

impl CsvSchema {
    pub fn new(date_col: impl Into<String>, value_col: impl Into<String>) -> Self {
        CsvSchema {
            date_col: date_col.into(),
            value_col: value_col.into(),
        }
    }
}

/// Gap-free monthly series of real-valued observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    start: YearMonth,
    period: usize,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start: YearMonth, period: usize, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("series must contain at least one value"));
        }
        if period < 2 {
            return Err(Error::invalid(format!("period {period} must be >= 2")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite value at position {i} ({})",
                values[i]
            )));
        }
        Ok(TimeSeries { start, period, values })
    }

    pub fn monthly(start: YearMonth, values: Vec<f64>) -> Result<Self> {
        TimeSeries::new(start, 12, values)
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Calendar month of observation `i`.
    pub fn month_at(&self, i: usize) -> YearMonth {
        self.start.plus_months(i as i64)
    }

    /// The first `len` observations as a series with the same start.
    pub fn prefix(&self, len: usize) -> Result<TimeSeries> {
        if len == 0 || len > self.values.len() {
            return Err(Error::invalid(format!(
                "prefix length {len} outside 1..={}",
                self.values.len()
            )));
        }
        TimeSeries::new(self.start, self.period, self.values[..len].to_vec())
    }

    /// Load a monthly series from CSV. Rows may appear in any order; duplicate or
    /// missing months are hard errors.
    pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<TimeSeries> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| {
            Error::invalid(format!("cannot open {}: {e}", path.display()))
        })?;
        TimeSeries::read_csv(BufReader::new(file), schema)
    }

    pub fn read_csv(reader: impl Read, schema: &CsvSchema) -> Result<TimeSeries> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();

        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::invalid("empty csv file"))?;
        let header = header?;
        let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
        let date_idx = cols
            .iter()
            .position(|c| *c == schema.date_col)
            .ok_or_else(|| Error::invalid(format!("missing column `{}`", schema.date_col)))?;
        let value_idx = cols
            .iter()
            .position(|c| *c == schema.value_col)
            .ok_or_else(|| Error::invalid(format!("missing column `{}`", schema.value_col)))?;

        let mut rows: Vec<(YearMonth, f64)> = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse_err = |message: String| Error::Parse { line: lineno + 1, message };
            if fields.len() <= date_idx.max(value_idx) {
                return Err(parse_err(format!("expected {} fields", cols.len())));
            }
            let month = YearMonth::parse(fields[date_idx])
                .map_err(|e| parse_err(e.to_string()))?;
            let value: f64 = fields[value_idx]
                .parse()
                .map_err(|_| parse_err(format!("bad value `{}`", fields[value_idx])))?;
            rows.push((month, value));
        }
        if rows.is_empty() {
            return Err(Error::invalid("csv contains no data rows"));
        }

        rows.sort_by_key(|(m, _)| *m);
        for pair in rows.windows(2) {
            let step = pair[1].0.months_since(&pair[0].0);
            if step == 0 {
                return Err(Error::DuplicateMonth(pair[0].0));
            }
            if step > 1 {
                return Err(Error::MissingMonth(pair[0].0.plus_months(1)));
            }
        }

        let start = rows[0].0;
        let values = rows.into_iter().map(|(_, v)| v).collect();
        TimeSeries::new(start, 12, values)
    }

    pub fn write_csv(&self, mut writer: impl Write, schema: &CsvSchema) -> Result<()> {
        writeln!(writer, "{},{}", schema.date_col, schema.value_col)?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(writer, "{},{}", self.month_at(i), v)?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>, schema: &CsvSchema) -> Result<()> {
        let file = File::create(path)?;
        self.write_csv(file, schema)
    }
}

/// Order statistics and moments of a value set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub count: usize,
    pub max: f64,
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    pub std: f64,
}

impl SummaryStats {
    /// Median is the midpoint average for even counts; std uses the n-1 denominator.
    pub fn from_values(values: &[f64]) -> Result<SummaryStats> {
        if values.is_empty() {
            return Err(Error::invalid("cannot summarize an empty value set"));
        }
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n as f64 - 1.0)).sqrt()
        } else {
            0.0
        };
        Ok(SummaryStats {
            count: n,
            max: sorted[n - 1],
            min: sorted[0],
            mean,
            median,
            std,
        })
    }
}

pub fn summary_stats(series: &TimeSeries) -> Result<SummaryStats> {
    SummaryStats::from_values(series.values())
}

/// Lag-embedded supervised rows: features of row i are the `lag` observations
/// preceding its target, most recent first.
#[derive(Debug, Clone, PartialEq)]
pub struct SupervisedDataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub lag: usize,
    /// Calendar month of each target.
    pub timestamps: Vec<YearMonth>,
}

impl SupervisedDataset {
    pub fn n_rows(&self) -> usize {
        self.targets.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    fn rows(&self, range: std::ops::Range<usize>) -> SupervisedDataset {
        SupervisedDataset {
            features: self.features[range.clone()].to_vec(),
            targets: self.targets[range.clone()].to_vec(),
            lag: self.lag,
            timestamps: self.timestamps[range].to_vec(),
        }
    }
}

pub fn lag_embed(series: &TimeSeries, lag: usize) -> Result<SupervisedDataset> {
    if lag == 0 {
        return Err(Error::invalid("lag must be >= 1"));
    }
    let n = series.len();
    if lag >= n {
        return Err(Error::invalid(format!(
            "lag {lag} must be smaller than the series length {n}"
        )));
    }
    let values = series.values();
    let mut features = Vec::with_capacity(n - lag);
    let mut targets = Vec::with_capacity(n - lag);
    let mut timestamps = Vec::with_capacity(n - lag);
    for t in lag..n {
        let row: Vec<f64> = (1..=lag).map(|j| values[t - j]).collect();
        features.push(row);
        targets.push(values[t]);
        timestamps.push(series.month_at(t));
    }
    Ok(SupervisedDataset { features, targets, lag, timestamps })
}

/// Chronological train/test split; train always precedes test.
#[derive(Debug, Clone)]
pub struct ChronoSplit {
    pub train: SupervisedDataset,
    pub test: SupervisedDataset,
    pub ratio: f64,
}

pub fn chrono_split(data: &SupervisedDataset, ratio: f64) -> Result<ChronoSplit> {
    if data.n_rows() == 0 {
        return Err(Error::invalid("cannot split an empty dataset"));
    }
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::invalid(format!("split ratio {ratio} outside (0, 1]")));
    }
    let n_train = (ratio * data.n_rows() as f64).floor() as usize;
    Ok(ChronoSplit {
        train: data.rows(0..n_train),
        test: data.rows(n_train..data.n_rows()),
        ratio,
    })
}

/// Deterministic synthetic series: linear trend + sinusoidal seasonality + Gaussian noise.
pub fn gen_synthetic(
    n: usize,
    period: usize,
    trend_slope: f64,
    seasonal_amplitude: f64,
    noise_std: f64,
    seed: u64,
) -> Result<TimeSeries> {
    if n == 0 || period == 0 {
        return Err(Error::invalid("n and period must be positive"));
    }
    if n <= 2 * period {
        return Err(Error::invalid(format!(
            "n = {n} must exceed two seasonal cycles ({})",
            2 * period
        )));
    }
    if noise_std < 0.0 {
        return Err(Error::invalid("noise_std must be >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_std.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::Numeric(e.to_string()))?;
    let omega = 2.0 * std::f64::consts::PI / period as f64;
    let values = (0..n)
        .map(|t| {
            let noise = if noise_std > 0.0 { normal.sample(&mut rng) } else { 0.0 };
            trend_slope * t as f64 + seasonal_amplitude * (omega * t as f64).sin() + noise
        })
        .collect();
    TimeSeries::new(YearMonth::new(2000, 1)?, period, values)
}
