//! The deployable strong classifier `sign(Σ_i w_i h_i(x) − T)`, with
//! `sign(0) = +1`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::stumps::Dictionary;
use crate::weights::WeightAssignment;

/// Provenance of a trained model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub method: String,
    pub solver: String,
    pub lambda: Option<f64>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boosting_rounds: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongClassifier {
    pub dictionary: Dictionary,
    pub weights: WeightAssignment,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingMeta>,
}

impl StrongClassifier {
    pub fn new(dictionary: Dictionary, weights: WeightAssignment, threshold: f64) -> Result<Self> {
        if weights.len() != dictionary.len() {
            return Err(Error::invalid(format!(
                "{} weights for a dictionary of {} stumps",
                weights.len(),
                dictionary.len()
            )));
        }
        if !threshold.is_finite() {
            return Err(Error::invalid("threshold must be finite"));
        }
        Ok(StrongClassifier {
            dictionary,
            weights,
            threshold,
            training: None,
        })
    }

    pub fn with_training(mut self, meta: TrainingMeta) -> Self {
        self.training = Some(meta);
        self
    }

    /// `Σ_i w_i h_i(x)` without the threshold.
    pub fn response(&self, x: &[f64]) -> Result<f64> {
        self.dictionary.check_input(x)?;
        Ok(self
            .dictionary
            .stumps
            .iter()
            .zip(self.weights.values())
            .filter(|(_, &w)| w != 0.0)
            .map(|(s, w)| w * s.output(x))
            .sum())
    }

    /// `Σ_i w_i h_i(x) − T`.
    pub fn margin(&self, x: &[f64]) -> Result<f64> {
        Ok(self.response(x)? - self.threshold)
    }

    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(Label::from_sign(self.margin(x)?))
    }

    /// Number of misclassified samples.
    pub fn count_errors(&self, data: &Dataset) -> Result<usize> {
        let mut errors = 0;
        for s in data {
            if self.predict(&s.features)? != s.label {
                errors += 1;
            }
        }
        Ok(errors)
    }

    pub fn active_count(&self) -> usize {
        self.weights.active_count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: StrongClassifier = serde_json::from_str(text)?;
        if c.weights.len() != c.dictionary.len() {
            return Err(Error::invalid("weights do not match dictionary size"));
        }
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Free-function form of [`StrongClassifier::predict`].
pub fn predict(classifier: &StrongClassifier, x: &[f64]) -> Result<Label> {
    classifier.predict(x)
}

/// Free-function form of [`StrongClassifier::margin`].
pub fn margin(classifier: &StrongClassifier, x: &[f64]) -> Result<f64> {
    classifier.margin(x)
}
