//! Sparse boosting of decision stumps by global binary optimization.
//!
//! Weak classifiers are decision stumps on single features or feature
//! products. Their binary (or fixed-point) weights are found by minimizing a
//! regularized training loss: the quadratic loss written as a QUBO and solved
//! by tabu search, or the 0-1 loss solved by simulated annealing. AdaBoost is
//! included as the greedy baseline.

pub mod adaboost;
pub mod analysis;
pub mod classifier;
pub mod data;
pub mod dataset;
pub mod error;
pub mod objective;
pub mod pipeline;
pub mod seed;
pub mod solvers;
pub mod stumps;
pub mod weights;

pub use adaboost::{train_adaboost, BoostModel, BoostRound};
pub use classifier::{StrongClassifier, TrainingMeta};
pub use dataset::{Dataset, Label, Sample};
pub use error::{Error, Result};
pub use objective::{build_qubo, QuboProblem, ResponseTable};
pub use pipeline::{train, EvalReport, Method, TrainSpec};
pub use stumps::{build_dictionary, Dictionary, ScaleMode, StumpSpec};
pub use weights::WeightAssignment;
