//! Synthetic benchmark sweep over overlap, sample ratio, method and seed.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{train_on_splits, Method, SolverSettings, SplitSpec, TrainSpec};
use crate::data::{generate, SyntheticConfig};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::stumps::dictionary_size;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub dimension: usize,
    pub order: u8,
    pub bit_depth: u32,
    pub overlaps: Vec<f64>,
    pub methods: Vec<Method>,
    /// Training samples per weak classifier; `S = round(f·N)`.
    pub f_values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub test_size: usize,
    pub variance_pos: f64,
    pub variance_neg: f64,
    pub separation_scale: f64,
    pub cv_folds: usize,
    pub lambda_grid: Option<Vec<f64>>,
    pub max_rounds: usize,
    pub solver: SolverSettings,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let base = SyntheticConfig::default();
        BenchConfig {
            dimension: base.dimension,
            order: 1,
            bit_depth: 1,
            overlaps: vec![0.7, 0.8, 0.9, 1.0],
            methods: vec![Method::Qp, Method::ZeroOne, Method::Adaboost],
            f_values: vec![1.0, 8.0],
            seeds: (0..10).collect(),
            test_size: 2000,
            variance_pos: base.variance_pos,
            variance_neg: base.variance_neg,
            separation_scale: base.separation_scale,
            cv_folds: 30,
            lambda_grid: None,
            max_rounds: 100,
            solver: SolverSettings::default(),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.overlaps.is_empty() || self.methods.is_empty() || self.f_values.is_empty() || self.seeds.is_empty() {
            return Err(Error::invalid("benchmark grids must be non-empty"));
        }
        if self.f_values.iter().any(|f| !(*f > 0.0) || !f.is_finite()) {
            return Err(Error::invalid("f values must be positive"));
        }
        if self.test_size == 0 {
            return Err(Error::invalid("test_size must be at least 1"));
        }
        Ok(())
    }

    pub fn num_stumps(&self) -> usize {
        dictionary_size(self.dimension, self.order)
    }

    fn train_spec(&self, method: Method, seed: u64) -> TrainSpec {
        TrainSpec {
            method,
            order: self.order,
            bit_depth: self.bit_depth,
            lambda_grid: self.lambda_grid.clone(),
            cv_folds: self.cv_folds,
            max_rounds: self.max_rounds,
            solver: self.solver,
            seed,
            split: SplitSpec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: Method,
    pub order: u8,
    pub bits: u32,
    pub f: f64,
    pub overlap: f64,
    pub seed: u64,
    pub test_error: f64,
    pub active_count: usize,
}

/// Runs every (overlap, f, seed) cell: draws training, validation (both of
/// size `f·N`) and test samples from one synthetic distribution, then trains
/// and tests each method on the same data. Rows come back ordered by
/// overlap, f, seed, then method, independent of scheduling.
pub fn benchmark_sweep(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let n = config.num_stumps();
    let cells: Vec<(f64, f64, u64)> = config
        .overlaps
        .iter()
        .flat_map(|&o| {
            config
                .f_values
                .iter()
                .flat_map(move |&f| config.seeds.iter().map(move |&s| (o, f, s)))
        })
        .collect();

    let per_cell: Vec<Vec<BenchRow>> = cells
        .par_iter()
        .map(|&(overlap, f, seed)| {
            let s = ((f * n as f64).round() as usize).max(1);
            let data_seed = derive_seed(seed, &[overlap.to_bits(), f.to_bits()]);
            let data = generate(&SyntheticConfig {
                dimension: config.dimension,
                overlap,
                variance_pos: config.variance_pos,
                variance_neg: config.variance_neg,
                num_samples: 2 * s + config.test_size,
                seed: data_seed,
                separation_scale: config.separation_scale,
            })?;
            let idx: Vec<usize> = (0..data.len()).collect();
            let train = data.subset(&idx[..s])?;
            let validation = data.subset(&idx[s..2 * s])?;
            let test = data.subset(&idx[2 * s..])?;
            config
                .methods
                .iter()
                .map(|&method| {
                    let spec = config.train_spec(method, derive_seed(data_seed, &[1]));
                    let outcome = train_on_splits(&train, &validation, &test, &spec)?;
                    log::info!(
                        "bench {method} overlap={overlap} f={f} seed={seed}: error {:.4}, active {}",
                        outcome.report.test_error_rate,
                        outcome.report.num_active_weak_classifiers
                    );
                    Ok(BenchRow {
                        method,
                        order: config.order,
                        bits: config.bit_depth,
                        f,
                        overlap,
                        seed,
                        test_error: outcome.report.test_error_rate,
                        active_count: outcome.report.num_active_weak_classifiers,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

/// Long-format CSV with header
/// `method,order,bits,f,overlap,seed,test_error,active_count`.
pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}
