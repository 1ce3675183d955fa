//! End-to-end training: dictionary construction, λ selection by
//! cross-validation, solving, threshold fitting and held-out evaluation.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adaboost::train_adaboost;
use crate::classifier::{StrongClassifier, TrainingMeta};
use crate::dataset::{Dataset, Sample};
use crate::error::{Error, Result};
use crate::objective::{build_qubo, quadratic_objective, ResponseTable};
use crate::seed::derive_seed;
use crate::solvers::{
    solve_anneal, solve_tabu, AnnealSchedule, Objective, SolveResult, TabuConfig, ZeroOneProblem,
};
use crate::stumps::{build_dictionary, Dictionary, ScaleMode};
use crate::weights::WeightAssignment;

mod bench;
mod cv;

pub use bench::{benchmark_sweep, write_bench_csv, BenchConfig, BenchRow};
pub use cv::{cross_validate_lambda, CvReport, LambdaScore};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Quadratic loss as a QUBO, solved by multi-start tabu search.
    Qp,
    /// 0-1 loss, solved by simulated annealing.
    ZeroOne,
    /// Discrete AdaBoost baseline.
    Adaboost,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Qp => "qp",
            Method::ZeroOne => "zero_one",
            Method::Adaboost => "adaboost",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "qp" => Some(Method::Qp),
            "zero_one" | "zero-one" | "01" => Some(Method::ZeroOne),
            "adaboost" | "ab" => Some(Method::Adaboost),
            _ => None,
        }
    }

    /// Output scale of the stumps this method trains on.
    pub fn scale_mode(self) -> ScaleMode {
        match self {
            Method::Qp => ScaleMode::OneOverN,
            Method::ZeroOne | Method::Adaboost => ScaleMode::Unit,
        }
    }

    pub fn solver_name(self) -> &'static str {
        match self {
            Method::Qp => "tabu",
            Method::ZeroOne => "anneal",
            Method::Adaboost => "adaboost",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Multiples of the loss scale making up the default λ grid. The upper
/// values reach the size of the label-correlation term `2S/N`, where every
/// weight switches off.
pub const DEFAULT_LAMBDA_MULTIPLIERS: [f64; 14] = [
    0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0,
];

/// Default λ grid for `num_samples` training samples and `num_stumps`
/// stumps. For the quadratic loss the unit is the diagonal self-term `S/N²`;
/// for the 0-1 loss it is `S/N` misclassifications.
pub fn default_lambda_grid(method: Method, num_samples: usize, num_stumps: usize) -> Vec<f64> {
    let (s, n) = (num_samples as f64, num_stumps.max(1) as f64);
    let unit = match method {
        Method::Qp => s / (n * n),
        _ => s / n,
    };
    DEFAULT_LAMBDA_MULTIPLIERS.iter().map(|m| m * unit).collect()
}

/// Annealing parameters in problem-relative form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSettings {
    /// `None` uses the number of training samples (the loss scale).
    pub t_initial: Option<f64>,
    pub cooling_factor: f64,
    /// Proposals per temperature level, in units of the variable count.
    pub sweeps_per_temperature: f64,
    pub t_final: f64,
}

impl Default for AnnealSettings {
    fn default() -> Self {
        AnnealSettings {
            t_initial: None,
            cooling_factor: 0.97,
            sweeps_per_temperature: 20.0,
            t_final: 1e-3,
        }
    }
}

impl AnnealSettings {
    pub fn schedule(&self, num_samples: usize, num_vars: usize) -> Result<AnnealSchedule> {
        AnnealSchedule::new(
            self.t_initial.unwrap_or(num_samples as f64),
            self.cooling_factor,
            ((self.sweeps_per_temperature * num_vars as f64).ceil() as usize).max(1),
            self.t_final,
        )
    }
}

/// Tabu parameters in problem-relative form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabuSettings {
    pub num_starts: usize,
    /// `None` uses `max(8, V/10)`.
    pub tenure: Option<usize>,
    pub iterations_per_var: usize,
    pub aspiration: bool,
}

impl Default for TabuSettings {
    fn default() -> Self {
        TabuSettings {
            num_starts: 32,
            tenure: None,
            iterations_per_var: 500,
            aspiration: true,
        }
    }
}

impl TabuSettings {
    pub fn config(&self, num_vars: usize) -> TabuConfig {
        let base = TabuConfig::default_for(num_vars);
        TabuConfig {
            num_starts: self.num_starts,
            tabu_tenure: self.tenure.unwrap_or(base.tabu_tenure),
            max_iterations_per_start: self.iterations_per_var * num_vars.max(1),
            aspiration: self.aspiration,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tabu: TabuSettings,
    pub anneal: AnnealSettings,
    /// Auxiliary-bit penalty for multi-bit QUBOs; `None` uses the default.
    pub kappa: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train: 1.0 / 3.0,
            validation: 1.0 / 3.0,
            test: 1.0 / 3.0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.validation, self.test];
        if parts.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::invalid("split fractions must all be positive"));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("split fractions must sum to 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainSpec {
    pub method: Method,
    pub order: u8,
    pub bit_depth: u32,
    /// `None` uses [`default_lambda_grid`].
    pub lambda_grid: Option<Vec<f64>>,
    pub cv_folds: usize,
    /// Upper limit on boosting rounds; the round count is chosen on validation.
    pub max_rounds: usize,
    pub solver: SolverSettings,
    pub seed: u64,
    pub split: SplitSpec,
}

impl TrainSpec {
    pub fn new(method: Method, seed: u64) -> Self {
        TrainSpec {
            method,
            order: 1,
            bit_depth: 1,
            lambda_grid: None,
            cv_folds: 30,
            max_rounds: 100,
            solver: SolverSettings::default(),
            seed,
            split: SplitSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order != 1 && self.order != 2 {
            return Err(Error::invalid(format!("order must be 1 or 2, got {}", self.order)));
        }
        if self.bit_depth == 0 || self.bit_depth > crate::weights::MAX_BIT_DEPTH {
            return Err(Error::invalid(format!("unsupported bit depth {}", self.bit_depth)));
        }
        if let Some(grid) = &self.lambda_grid {
            if grid.is_empty() {
                return Err(Error::invalid("lambda grid must not be empty"));
            }
            if grid.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
                return Err(Error::invalid("lambda values must be finite and >= 0"));
            }
        }
        if self.cv_folds < 2 {
            return Err(Error::invalid("cross-validation needs at least 2 folds"));
        }
        if self.max_rounds == 0 {
            return Err(Error::invalid("max_rounds must be at least 1"));
        }
        self.split.validate()
    }

    pub fn lambda_grid_for(&self, num_samples: usize, num_stumps: usize) -> Vec<f64> {
        self.lambda_grid
            .clone()
            .unwrap_or_else(|| default_lambda_grid(self.method, num_samples, num_stumps))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: Method,
    pub test_error_rate: f64,
    pub test_errors: usize,
    pub test_size: usize,
    pub num_active_weak_classifiers: usize,
    pub dictionary_size: usize,
    pub lambda: Option<f64>,
    pub threshold: f64,
    /// Held-out error rate of each fold at the chosen λ.
    pub per_fold_validation_errors: Vec<f64>,
    pub cv: Option<CvReport>,
    /// Regularized training objective of the returned weights (QP: quadratic
    /// loss; 0-1: misclassifications).
    pub train_objective: Option<f64>,
    /// Solver energy of the returned bits, plus the dropped constant.
    pub solver_energy_with_offset: Option<f64>,
    pub boosting_rounds: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub classifier: StrongClassifier,
    pub report: EvalReport,
    pub runtime: Duration,
}

/// Mean strong-classifier response `Σ_i w_i h_i(x)` over the validation
/// samples. An empty validation set gives `T = 0`.
pub fn fit_threshold_t(weights: &WeightAssignment, dict: &Dictionary, validation: &[Sample]) -> Result<f64> {
    if weights.len() != dict.len() {
        return Err(Error::invalid("weights do not match the dictionary"));
    }
    if validation.is_empty() {
        log::warn!("empty validation set; using threshold T = 0");
        return Ok(0.0);
    }
    let mut total = 0.0;
    for s in validation {
        dict.check_input(&s.features)?;
        total += dict
            .stumps
            .iter()
            .zip(weights.values())
            .filter(|(_, &w)| w != 0.0)
            .map(|(st, w)| w * st.output(&s.features))
            .sum::<f64>();
    }
    Ok(total / validation.len() as f64)
}

/// Weights from one solver run on a training table.
pub(crate) struct SolvedWeights {
    pub weights: WeightAssignment,
    pub result: SolveResult,
    pub offset: f64,
    pub kappa: Option<f64>,
}

pub(crate) fn solve_weights(
    method: Method,
    table: &ResponseTable,
    lambda: f64,
    bit_depth: u32,
    solver: &SolverSettings,
    seed: u64,
) -> Result<SolvedWeights> {
    match method {
        Method::Qp => {
            let problem = build_qubo(table, lambda, bit_depth, solver.kappa)?;
            let result = solve_tabu(&problem, &solver.tabu.config(problem.num_vars()), seed)?;
            Ok(SolvedWeights {
                weights: problem.decode(&result.best_bits)?,
                offset: problem.offset(),
                kappa: problem.kappa(),
                result,
            })
        }
        Method::ZeroOne => {
            let problem = ZeroOneProblem::new(table, lambda, bit_depth)?;
            let schedule = solver.anneal.schedule(table.num_samples(), problem.num_vars())?;
            let result = solve_anneal(&problem, &schedule, seed)?;
            Ok(SolvedWeights {
                weights: problem.decode(&result.best_bits)?,
                offset: 0.0,
                kappa: None,
                result,
            })
        }
        Method::Adaboost => Err(Error::invalid("AdaBoost is not a binary-program method")),
    }
}

/// Splits `data` by the spec's fractions after a seeded shuffle and trains.
pub fn train(data: &Dataset, spec: &TrainSpec) -> Result<TrainOutcome> {
    spec.validate()?;
    let (train_set, validation, test) = split_dataset(data, &spec.split, derive_seed(spec.seed, &[0x5EED]))?;
    train_on_splits(&train_set, &validation, &test, spec)
}

/// Seeded shuffle and three-way split. Every part gets at least one sample.
pub fn split_dataset(data: &Dataset, split: &SplitSpec, seed: u64) -> Result<(Dataset, Dataset, Dataset)> {
    split.validate()?;
    let s = data.len();
    if s < 3 {
        return Err(Error::invalid("need at least 3 samples to split into train/validation/test"));
    }
    let mut idx: Vec<usize> = (0..s).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((split.train * s as f64).round() as usize).clamp(1, s - 2);
    let n_val = ((split.validation * s as f64).round() as usize).clamp(1, s - n_train - 1);
    Ok((
        data.subset(&idx[..n_train])?,
        data.subset(&idx[n_train..n_train + n_val])?,
        data.subset(&idx[n_train + n_val..])?,
    ))
}

/// Full pipeline on explicit splits. The test set is only used for the final
/// error count.
pub fn train_on_splits(
    train_set: &Dataset,
    validation: &Dataset,
    test: &Dataset,
    spec: &TrainSpec,
) -> Result<TrainOutcome> {
    spec.validate()?;
    let start = Instant::now();
    if spec.method == Method::Adaboost {
        return train_adaboost_path(train_set, validation, test, spec, start);
    }

    let pool = train_set.concat(validation)?;
    let cv = cross_validate_lambda(&pool, spec, train_set.len())?;
    let lambda = cv.chosen_lambda;

    let dict = build_dictionary(train_set, spec.order, spec.method.scale_mode())?;
    let table = ResponseTable::new(&dict, train_set)?;
    let solved = solve_weights(
        spec.method,
        &table,
        lambda,
        spec.bit_depth,
        &spec.solver,
        derive_seed(spec.seed, &[0xF1A1]),
    )?;
    let threshold = fit_threshold_t(&solved.weights, &dict, validation.samples())?;
    let train_objective = match spec.method {
        Method::Qp => quadratic_objective(&solved.weights, &table, lambda)?,
        _ => crate::objective::zero_one_objective(&solved.weights, &table, lambda)?,
    };
    let classifier = StrongClassifier::new(dict, solved.weights, threshold)?.with_training(TrainingMeta {
        method: spec.method.name().into(),
        solver: spec.method.solver_name().into(),
        lambda: Some(lambda),
        seed: spec.seed,
        kappa: solved.kappa,
        boosting_rounds: None,
    });
    let test_errors = classifier.count_errors(test)?;
    let per_fold = cv
        .scores
        .iter()
        .find(|s| s.lambda == lambda)
        .map(|s| s.fold_error_rates.clone())
        .unwrap_or_default();
    let report = EvalReport {
        method: spec.method,
        test_error_rate: test_errors as f64 / test.len() as f64,
        test_errors,
        test_size: test.len(),
        num_active_weak_classifiers: classifier.active_count(),
        dictionary_size: classifier.dictionary.len(),
        lambda: Some(lambda),
        threshold,
        per_fold_validation_errors: per_fold,
        cv: Some(cv),
        train_objective: Some(train_objective),
        solver_energy_with_offset: Some(solved.result.best_energy + solved.offset),
        boosting_rounds: None,
    };
    Ok(TrainOutcome {
        classifier,
        report,
        runtime: start.elapsed(),
    })
}

fn train_adaboost_path(
    train_set: &Dataset,
    validation: &Dataset,
    test: &Dataset,
    spec: &TrainSpec,
    start: Instant,
) -> Result<TrainOutcome> {
    let dict = build_dictionary(train_set, spec.order, ScaleMode::Unit)?;
    let model = train_adaboost(train_set, &dict, spec.max_rounds)?;
    // pick the number of rounds with the lowest validation error; ties -> fewer rounds
    let mut best: Option<(usize, usize)> = None;
    let mut margins = vec![0.0; validation.len()];
    for (t, round) in model.rounds.iter().enumerate() {
        let stump = &dict.stumps[round.stump];
        let mut errors = 0;
        for (m, s) in margins.iter_mut().zip(validation) {
            *m += round.alpha * stump.decide(&s.features).sign();
            if crate::dataset::Label::from_sign(*m) != s.label {
                errors += 1;
            }
        }
        if best.is_none_or(|(_, e)| errors < e) {
            best = Some((t + 1, errors));
        }
    }
    let rounds = best.map_or(0, |(t, _)| t);
    let chosen = model.truncated(rounds);
    let mut classifier = chosen.to_classifier(&dict)?;
    if let Some(meta) = classifier.training.as_mut() {
        meta.seed = spec.seed;
    }
    let test_errors = classifier.count_errors(test)?;
    let report = EvalReport {
        method: Method::Adaboost,
        test_error_rate: test_errors as f64 / test.len() as f64,
        test_errors,
        test_size: test.len(),
        num_active_weak_classifiers: classifier.active_count(),
        dictionary_size: dict.len(),
        lambda: None,
        threshold: 0.0,
        per_fold_validation_errors: Vec::new(),
        cv: None,
        train_objective: None,
        solver_energy_with_offset: None,
        boosting_rounds: Some(rounds),
    };
    Ok(TrainOutcome {
        classifier,
        report,
        runtime: start.elapsed(),
    })
}
