//! Synthetic two-Gaussian data and CSV ingestion.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, Sample};
use crate::error::{Error, Result};

/// Two isotropic Gaussian classes in `dimension` dimensions, drawn with equal
/// probability. The class means sit at `±(separation/2)·e₁` with
/// `separation = separation_scale·√variance_pos·(1 − overlap)`, so overlap 0
/// is maximally segregated and overlap 1 makes the means coincide.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub dimension: usize,
    pub overlap: f64,
    pub variance_pos: f64,
    pub variance_neg: f64,
    pub num_samples: usize,
    pub seed: u64,
    #[serde(default = "default_separation_scale")]
    pub separation_scale: f64,
}

fn default_separation_scale() -> f64 {
    6.0
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            dimension: 30,
            overlap: 0.7,
            variance_pos: 1.0,
            variance_neg: 2.0,
            num_samples: 1000,
            seed: 0,
            separation_scale: default_separation_scale(),
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return Err(Error::invalid(format!("overlap must be in [0, 1], got {}", self.overlap)));
        }
        if !(self.variance_pos > 0.0 && self.variance_neg > 0.0) {
            return Err(Error::invalid("class variances must be positive"));
        }
        if self.num_samples == 0 {
            return Err(Error::invalid("num_samples must be at least 1"));
        }
        if !(self.separation_scale >= 0.0) {
            return Err(Error::invalid("separation_scale must be non-negative"));
        }
        Ok(())
    }

    /// Distance between the two class means.
    pub fn separation(&self) -> f64 {
        self.separation_scale * self.variance_pos.sqrt() * (1.0 - self.overlap)
    }

    /// Means of the positive and negative class.
    pub fn means(&self) -> (Vec<f64>, Vec<f64>) {
        let half = self.separation() / 2.0;
        let mut pos = vec![0.0; self.dimension];
        let mut neg = vec![0.0; self.dimension];
        pos[0] = half;
        neg[0] = -half;
        (pos, neg)
    }

    /// Writes the configuration as a JSON sidecar.
    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

/// Draws a dataset; the samples are normalized to unit 2-norm.
pub fn generate(config: &SyntheticConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mu_pos, mu_neg) = config.means();
    let (sd_pos, sd_neg) = (config.variance_pos.sqrt(), config.variance_neg.sqrt());
    let mut samples = Vec::with_capacity(config.num_samples);
    while samples.len() < config.num_samples {
        let label = if rng.random_bool(0.5) {
            Label::Positive
        } else {
            Label::Negative
        };
        let (mu, sd) = match label {
            Label::Positive => (&mu_pos, sd_pos),
            Label::Negative => (&mu_neg, sd_neg),
        };
        let x: Vec<f64> = mu
            .iter()
            .map(|m| m + sd * rng.sample::<f64, _>(StandardNormal))
            .collect();
        // a draw of exactly zero has probability zero; redraw if it happens
        if let Ok(s) = Sample::normalized(x, label) {
            samples.push(s);
        }
    }
    Dataset::new(samples)
}

/// Loads a CSV file with a header row, `M` feature columns and a final label
/// column holding `-1` or `1`. Rows are normalized to unit 2-norm unless
/// `normalize` is false.
pub fn load_csv(path: &Path, normalize: bool) -> Result<Dataset> {
    let csv_err = |row: usize, message: String| Error::Csv {
        path: path.to_path_buf(),
        row,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(0, e.to_string()))?;
    let header_len = reader
        .headers()
        .map_err(|e| csv_err(1, e.to_string()))?
        .len();
    if header_len < 2 {
        return Err(csv_err(1, "need at least one feature column and a label column".into()));
    }
    let mut samples = Vec::new();
    for (k, record) in reader.records().enumerate() {
        // header is row 1
        let row = k + 2;
        let record = record.map_err(|e| csv_err(row, e.to_string()))?;
        if record.len() != header_len {
            return Err(csv_err(
                row,
                format!("expected {header_len} columns, found {}", record.len()),
            ));
        }
        let mut features = Vec::with_capacity(header_len - 1);
        for (col, field) in record.iter().take(header_len - 1).enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| csv_err(row, format!("column {}: `{field}` is not a number", col + 1)))?;
            if !v.is_finite() {
                return Err(csv_err(row, format!("column {}: non-finite value", col + 1)));
            }
            features.push(v);
        }
        let raw_label = &record[header_len - 1];
        let label = raw_label
            .parse::<f64>()
            .ok()
            .filter(|v| v.fract() == 0.0)
            .and_then(|v| Label::from_value(v as i64))
            .ok_or_else(|| csv_err(row, format!("label must be -1 or 1, got `{raw_label}`")))?;
        let sample = if normalize {
            Sample::normalized(features, label)
                .map_err(|_| csv_err(row, "zero feature vector cannot be normalized".into()))?
        } else {
            Sample::new(features, label)
        };
        samples.push(sample);
    }
    if samples.is_empty() {
        return Err(csv_err(1, "no data rows".into()));
    }
    Dataset::new(samples)
}

/// Writes `data` in the format read by [`load_csv`], with columns
/// `x0..x{M-1},label`. Values are written with round-trip precision.
pub fn save_csv(data: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(std::io::Error::from)?;
    let mut header: Vec<String> = (0..data.dim()).map(|j| format!("x{j}")).collect();
    header.push("label".into());
    w.write_record(&header).map_err(std::io::Error::from)?;
    for s in data {
        let mut rec: Vec<String> = s.features.iter().map(|v| v.to_string()).collect();
        rec.push(s.label.value().to_string());
        w.write_record(&rec).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}
