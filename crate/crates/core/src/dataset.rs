//! Labeled samples and datasets.
//!
//! Feature vectors are normalized to unit 2-norm when they enter the system
//! ([`Sample::normalized`], [`Dataset::from_raw`]); everything downstream
//! assumes unit-norm inputs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary class label, serialized as `-1` / `+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_value(v: i64) -> Option<Label> {
        match v {
            -1 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    /// Sign convention used throughout: zero maps to `Positive`.
    pub fn from_sign(x: f64) -> Label {
        if x >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Negative => Label::Positive,
            Label::Positive => Label::Negative,
        }
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Label::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("label must be -1 or +1, got {v}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: Label,
}

impl Sample {
    /// Builds a sample without touching the features.
    pub fn new(features: Vec<f64>, label: Label) -> Self {
        Sample { features, label }
    }

    /// Builds a sample scaled to unit 2-norm. Zero vectors are rejected.
    pub fn normalized(mut features: Vec<f64>, label: Label) -> Result<Self> {
        let norm = l2_norm(&features);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector { index: 0 });
        }
        for v in &mut features {
            *v /= norm;
        }
        Ok(Sample { features, label })
    }

    pub fn dim(&self) -> usize {
        self.features.len()
    }
}

pub fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A non-empty set of samples sharing one dimensionality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::invalid("dataset must contain at least one sample"));
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::invalid("samples must have at least one feature"));
        }
        for s in &samples {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.dim(),
                });
            }
        }
        let ds = Dataset { samples, dim };
        let (neg, pos) = ds.class_counts();
        if neg == 0 || pos == 0 {
            log::warn!(
                "dataset of {} samples contains only one class ({} negative, {} positive)",
                ds.len(),
                neg,
                pos
            );
        }
        Ok(ds)
    }

    /// Builds a dataset from raw rows, optionally normalizing each row to unit 2-norm.
    pub fn from_raw(rows: Vec<Vec<f64>>, labels: Vec<Label>, normalize: bool) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} feature rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let samples = rows
            .into_iter()
            .zip(labels)
            .enumerate()
            .map(|(index, (row, label))| {
                if normalize {
                    Sample::normalized(row, label).map_err(|_| Error::ZeroVector { index })
                } else {
                    Ok(Sample::new(row, label))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples)
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    /// `(negative, positive)` counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self
            .samples
            .iter()
            .filter(|s| s.label == Label::Positive)
            .count();
        (self.samples.len() - pos, pos)
    }

    /// The samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let samples = indices
            .iter()
            .map(|&i| {
                self.samples
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("sample index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples)
    }

    /// Concatenation of two datasets of equal dimensionality.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples);
        Dataset::new(samples)
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Sample;
    type IntoIter = std::slice::Iter<'a, Sample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}
