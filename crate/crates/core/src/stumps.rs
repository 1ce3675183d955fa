//! Decision-stump dictionaries.
//!
//! An order-1 stump thresholds a single coordinate, `sign(±x_l − Θ)`; an
//! order-2 stump thresholds a pairwise product, `sign(±x_i·x_j − Θ)`. Both
//! polarities are separate weak classifiers with independently fitted
//! thresholds. Indices are zero-based.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, Sample};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }
}

/// What a stump looks at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StumpInput {
    Single(usize),
    /// Product `x_i·x_j` with `i < j`.
    Pair(usize, usize),
}

impl StumpInput {
    pub fn order(self) -> u8 {
        match self {
            StumpInput::Single(_) => 1,
            StumpInput::Pair(..) => 2,
        }
    }

    fn max_index(self) -> usize {
        match self {
            StumpInput::Single(l) => l,
            StumpInput::Pair(_, j) => j,
        }
    }

    fn raw(self, x: &[f64]) -> f64 {
        match self {
            StumpInput::Single(l) => x[l],
            StumpInput::Pair(i, j) => x[i] * x[j],
        }
    }
}

/// A stump without its threshold: the unit over which thresholds are fitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StumpFamily {
    pub input: StumpInput,
    pub polarity: Polarity,
}

impl StumpFamily {
    pub fn new(input: StumpInput, polarity: Polarity) -> Result<Self> {
        if let StumpInput::Pair(i, j) = input {
            if i >= j {
                return Err(Error::invalid(format!(
                    "order-2 stump needs i < j, got ({i}, {j})"
                )));
            }
        }
        Ok(StumpFamily { input, polarity })
    }

    pub fn order(&self) -> u8 {
        self.input.order()
    }

    /// The signed value compared against the threshold.
    pub fn project(&self, x: &[f64]) -> f64 {
        self.polarity.sign() * self.input.raw(x)
    }

    fn sort_key(&self) -> (u8, Polarity, StumpInput) {
        (self.order(), self.polarity, self.input)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StumpSpec {
    #[serde(flatten)]
    pub family: StumpFamily,
    pub threshold: f64,
    pub output_scale: f64,
}

impl StumpSpec {
    /// `+1` when `project(x) − Θ ≥ 0`, `−1` otherwise.
    pub fn decide(&self, x: &[f64]) -> Label {
        Label::from_sign(self.family.project(x) - self.threshold)
    }

    /// Scaled output in `{−scale, +scale}`. Panics on out-of-range indices;
    /// use [`evaluate_stump`] for checked evaluation.
    pub fn output(&self, x: &[f64]) -> f64 {
        self.output_scale * self.decide(x).sign()
    }
}

/// Checked stump evaluation.
pub fn evaluate_stump(stump: &StumpSpec, x: &[f64]) -> Result<f64> {
    let needed = stump.family.input.max_index() + 1;
    if x.len() < needed {
        return Err(Error::invalid(format!(
            "stump reads feature index {} but input has {} features",
            needed - 1,
            x.len()
        )));
    }
    Ok(stump.output(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub threshold: f64,
    pub errors: usize,
}

/// Fits the threshold minimizing the stump's standalone misclassification
/// count. Candidates are the midpoints between consecutive distinct projected
/// values, plus one sentinel below the minimum and one above the maximum;
/// ties go to the smallest candidate.
pub fn fit_threshold(family: StumpFamily, samples: &[Sample]) -> ThresholdFit {
    if samples.is_empty() {
        return ThresholdFit {
            threshold: 0.0,
            errors: 0,
        };
    }
    let mut proj: Vec<(f64, Label)> = samples
        .iter()
        .map(|s| (family.project(&s.features), s.label))
        .collect();
    proj.sort_by(|a, b| a.0.total_cmp(&b.0));

    let pos_total = proj.iter().filter(|p| p.1 == Label::Positive).count();
    let neg_total = proj.len() - pos_total;
    let lo = proj[0].0;
    let hi = proj[proj.len() - 1].0;

    // Sentinel below the minimum: everything is predicted +1.
    let mut best = ThresholdFit {
        threshold: lo - 1.0,
        errors: neg_total,
    };
    // Running counts of samples at or below the current group (predicted −1).
    let mut pos_below = 0usize;
    let mut neg_below = 0usize;
    let mut k = 0;
    while k < proj.len() {
        let value = proj[k].0;
        while k < proj.len() && proj[k].0 == value {
            match proj[k].1 {
                Label::Positive => pos_below += 1,
                Label::Negative => neg_below += 1,
            }
            k += 1;
        }
        let threshold = if k < proj.len() {
            value + (proj[k].0 - value) / 2.0
        } else {
            hi + 1.0
        };
        let errors = pos_below + (neg_total - neg_below);
        if errors < best.errors {
            best = ThresholdFit { threshold, errors };
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleMode {
    /// Stump outputs are ±1.
    Unit,
    /// Stump outputs are ±1/N for a dictionary of N stumps.
    OneOverN,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dictionary {
    pub dim: usize,
    pub order_level: u8,
    pub scale_mode: ScaleMode,
    pub stumps: Vec<StumpSpec>,
}

/// Closed-form dictionary size: `2M` for order 1, `2M + 2·C(M,2)` for order 2.
pub fn dictionary_size(dim: usize, order_level: u8) -> usize {
    match order_level {
        1 => 2 * dim,
        _ => 2 * dim + dim * dim.saturating_sub(1),
    }
}

/// All stump families for `dim` inputs, sorted by (order, polarity, indices).
pub fn stump_families(dim: usize, order_level: u8) -> Result<Vec<StumpFamily>> {
    if dim == 0 {
        return Err(Error::invalid("dimensionality must be at least 1"));
    }
    match order_level {
        1 => {}
        2 if dim < 2 => {
            return Err(Error::invalid(format!(
                "order-2 dictionary needs at least 2 features, got {dim}"
            )))
        }
        2 => {}
        other => {
            return Err(Error::invalid(format!(
                "dictionary order must be 1 or 2, got {other}"
            )))
        }
    }
    let mut families = Vec::with_capacity(dictionary_size(dim, order_level));
    for polarity in [Polarity::Positive, Polarity::Negative] {
        for l in 0..dim {
            families.push(StumpFamily {
                input: StumpInput::Single(l),
                polarity,
            });
        }
    }
    if order_level == 2 {
        for polarity in [Polarity::Positive, Polarity::Negative] {
            for i in 0..dim {
                for j in i + 1..dim {
                    families.push(StumpFamily {
                        input: StumpInput::Pair(i, j),
                        polarity,
                    });
                }
            }
        }
    }
    debug_assert!(families.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
    Ok(families)
}

/// Builds the order-1 or order-2 dictionary with thresholds fitted on `data`.
pub fn build_dictionary(data: &Dataset, order_level: u8, scale_mode: ScaleMode) -> Result<Dictionary> {
    let families = stump_families(data.dim(), order_level)?;
    let n = families.len();
    let scale = match scale_mode {
        ScaleMode::Unit => 1.0,
        ScaleMode::OneOverN => 1.0 / n as f64,
    };
    let stumps = families
        .par_iter()
        .map(|&family| {
            let fit = fit_threshold(family, data.samples());
            StumpSpec {
                family,
                threshold: fit.threshold,
                output_scale: scale,
            }
        })
        .collect();
    Ok(Dictionary {
        dim: data.dim(),
        order_level,
        scale_mode,
        stumps,
    })
}

impl Dictionary {
    pub fn len(&self) -> usize {
        self.stumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stumps.is_empty()
    }

    /// Output scale implied by `mode` for this dictionary's size.
    pub fn scale_for(&self, mode: ScaleMode) -> f64 {
        match mode {
            ScaleMode::Unit => 1.0,
            ScaleMode::OneOverN => 1.0 / self.len() as f64,
        }
    }

    /// Same stumps and thresholds, different output scale.
    pub fn with_scale(&self, mode: ScaleMode) -> Dictionary {
        let scale = self.scale_for(mode);
        Dictionary {
            scale_mode: mode,
            stumps: self
                .stumps
                .iter()
                .map(|s| StumpSpec {
                    output_scale: scale,
                    ..*s
                })
                .collect(),
            ..self.clone()
        }
    }

    pub fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Scaled outputs of every stump on `x`.
    pub fn responses(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.stumps.iter().map(|s| s.output(x)).collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
