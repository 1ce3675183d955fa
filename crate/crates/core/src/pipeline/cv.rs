//! k-fold cross-validation over the λ grid.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_threshold_t, solve_weights, Method, TrainSpec};
use crate::classifier::StrongClassifier;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::objective::ResponseTable;
use crate::seed::derive_seed;
use crate::stumps::build_dictionary;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaScore {
    pub lambda: f64,
    pub mean_error_rate: f64,
    pub mean_active: f64,
    pub fold_error_rates: Vec<f64>,
    /// Mean active count stayed within `N/2`.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub folds: usize,
    pub num_stumps: usize,
    pub scores: Vec<LambdaScore>,
    pub chosen_lambda: f64,
    /// No λ met the active-count cap and the largest grid value was used.
    pub fell_back: bool,
}

/// Fold boundaries of `len` items split into `k` contiguous folds whose sizes
/// differ by at most one.
pub(crate) fn fold_ranges(len: usize, k: usize) -> Vec<(usize, usize)> {
    let base = len / k;
    let extra = len % k;
    let mut start = 0;
    (0..k)
        .map(|f| {
            let size = base + usize::from(f < extra);
            let r = (start, start + size);
            start += size;
            r
        })
        .collect()
}

/// Runs `spec.cv_folds`-fold cross-validation on `pool` for every λ of the
/// grid and picks one. The fold count is capped at the pool size.
///
/// Grid values refer to a training set of `target_size` samples. Both losses
/// grow linearly with the sample count, so each fold solves with
/// `λ·S_fold/target_size`.
pub fn cross_validate_lambda(pool: &Dataset, spec: &TrainSpec, target_size: usize) -> Result<CvReport> {
    if spec.method == Method::Adaboost {
        return Err(Error::invalid("AdaBoost has no λ to cross-validate"));
    }
    let s = pool.len();
    if s < 2 {
        return Err(Error::invalid("cross-validation needs at least 2 samples"));
    }
    let k = spec.cv_folds.min(s);
    if k < spec.cv_folds {
        log::warn!("reducing cross-validation from {} to {k} folds", spec.cv_folds);
    }
    let num_stumps = crate::stumps::dictionary_size(pool.dim(), spec.order);
    if target_size == 0 {
        return Err(Error::invalid("target training size must be positive"));
    }
    let grid = spec.lambda_grid_for(target_size, num_stumps);

    let mut order: Vec<usize> = (0..s).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, &[0xC0FF])));
    let ranges = fold_ranges(s, k);

    // per fold: (errors, held-out size, active count) for every λ
    let per_fold: Vec<Vec<(usize, usize, usize)>> = ranges
        .par_iter()
        .enumerate()
        .map(|(f, &(lo, hi))| -> Result<Vec<(usize, usize, usize)>> {
            let held: Vec<usize> = order[lo..hi].to_vec();
            let rest: Vec<usize> = order[..lo].iter().chain(&order[hi..]).copied().collect();
            let fold_train = pool.subset(&rest)?;
            let fold_test = pool.subset(&held)?;
            let dict = build_dictionary(&fold_train, spec.order, spec.method.scale_mode())?;
            let table = ResponseTable::new(&dict, &fold_train)?;
            grid.iter()
                .enumerate()
                .map(|(li, &lambda)| {
                    let seed = derive_seed(spec.seed, &[f as u64, li as u64]);
                    let scaled = lambda * fold_train.len() as f64 / target_size as f64;
                    let solved = solve_weights(spec.method, &table, scaled, spec.bit_depth, &spec.solver, seed)?;
                    let t = fit_threshold_t(&solved.weights, &dict, fold_test.samples())?;
                    let clf = StrongClassifier::new(dict.clone(), solved.weights, t)?;
                    Ok((clf.count_errors(&fold_test)?, fold_test.len(), clf.active_count()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let cap = num_stumps as f64 / 2.0;
    let scores: Vec<LambdaScore> = grid
        .iter()
        .enumerate()
        .map(|(li, &lambda)| {
            let rates: Vec<f64> = per_fold
                .iter()
                .map(|fold| fold[li].0 as f64 / fold[li].1 as f64)
                .collect();
            let mean_active = per_fold.iter().map(|fold| fold[li].2 as f64).sum::<f64>() / k as f64;
            LambdaScore {
                lambda,
                mean_error_rate: rates.iter().sum::<f64>() / k as f64,
                mean_active,
                fold_error_rates: rates,
                admissible: mean_active <= cap,
            }
        })
        .collect();

    // lowest mean error; ties go to the larger λ
    let best = scores
        .iter()
        .filter(|sc| sc.admissible)
        .fold(None::<&LambdaScore>, |acc, sc| match acc {
            Some(b) if sc.mean_error_rate > b.mean_error_rate => Some(b),
            Some(b) if sc.mean_error_rate == b.mean_error_rate && sc.lambda <= b.lambda => Some(b),
            _ => Some(sc),
        });
    let (chosen_lambda, fell_back) = match best {
        Some(b) => (b.lambda, false),
        None => {
            let largest = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            log::warn!("no λ keeps the active count within N/2; using the largest, {largest}");
            (largest, true)
        }
    };
    Ok(CvReport {
        folds: k,
        num_stumps,
        scores,
        chosen_lambda,
        fell_back,
    })
}
