//! Discrete AdaBoost over a stump dictionary, used as the greedy baseline.

use serde::{Deserialize, Serialize};

use crate::classifier::{StrongClassifier, TrainingMeta};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::stumps::{Dictionary, ScaleMode};
use crate::weights::WeightAssignment;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostRound {
    pub stump: usize,
    pub alpha: f64,
    /// Weighted error of the stump when it was selected.
    pub weighted_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoostModel {
    pub rounds: Vec<BoostRound>,
    pub num_stumps: usize,
}

/// `½·ln((1 − ε)/ε)`.
pub fn alpha_for(epsilon: f64) -> f64 {
    0.5 * ((1.0 - epsilon) / epsilon).ln()
}

/// Trains `num_rounds` rounds of discrete AdaBoost. Each round picks the
/// stump with the lowest weighted error (ties to the lowest index). Training
/// stops early after a perfect stump, which is included with the capped
/// weight `α(1/(2S))`, or when no stump beats 0.5, which is not included.
pub fn train_adaboost(data: &Dataset, dict: &Dictionary, num_rounds: usize) -> Result<BoostModel> {
    if dict.is_empty() {
        return Err(Error::invalid("AdaBoost needs a non-empty dictionary"));
    }
    if num_rounds == 0 {
        return Err(Error::invalid("AdaBoost needs at least one round"));
    }
    dict.check_input(&data.samples()[0].features)?;
    let s_count = data.len();
    let n = dict.len();
    // correct[s * n + j]: stump j classifies sample s correctly
    let mut correct = Vec::with_capacity(s_count * n);
    for s in data {
        correct.extend(dict.stumps.iter().map(|st| st.decide(&s.features) == s.label));
    }
    let eps_min = 1.0 / (2.0 * s_count as f64);
    let mut dist = vec![1.0 / s_count as f64; s_count];
    let mut rounds = Vec::new();

    for _ in 0..num_rounds {
        let mut errs = vec![0.0; n];
        for (s, &d) in dist.iter().enumerate() {
            for (e, &ok) in errs.iter_mut().zip(&correct[s * n..(s + 1) * n]) {
                if !ok {
                    *e += d;
                }
            }
        }
        let (best, eps) = errs
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, e)| if e < acc.1 { (j, e) } else { acc });
        if eps >= 0.5 {
            break;
        }
        let perfect = eps <= 0.0;
        let alpha = alpha_for(if perfect { eps_min } else { eps });
        rounds.push(BoostRound {
            stump: best,
            alpha,
            weighted_error: eps.max(0.0),
        });
        if perfect {
            break;
        }
        let up = alpha.exp();
        let down = (-alpha).exp();
        for (s, d) in dist.iter_mut().enumerate() {
            *d *= if correct[s * n + best] { down } else { up };
        }
        let z: f64 = dist.iter().sum();
        for d in &mut dist {
            *d /= z;
        }
        debug_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
    Ok(BoostModel {
        rounds,
        num_stumps: n,
    })
}

impl BoostModel {
    /// Sum of alphas per stump.
    pub fn alpha_sums(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.num_stumps];
        for r in &self.rounds {
            w[r.stump] += r.alpha;
        }
        w
    }

    /// The model restricted to its first `k` rounds.
    pub fn truncated(&self, k: usize) -> BoostModel {
        BoostModel {
            rounds: self.rounds[..k.min(self.rounds.len())].to_vec(),
            num_stumps: self.num_stumps,
        }
    }

    pub fn distinct_stumps(&self) -> usize {
        self.alpha_sums().iter().filter(|&&a| a > 0.0).count()
    }

    /// `Σ_t α_t h_t(x)` over unit-scale stump decisions.
    pub fn margin(&self, dict: &Dictionary, x: &[f64]) -> Result<f64> {
        dict.check_input(x)?;
        Ok(self
            .rounds
            .iter()
            .map(|r| r.alpha * dict.stumps[r.stump].decide(x).sign())
            .sum())
    }

    /// Classical bound `Π_t 2·√(ε_t(1 − ε_t))` on the training error rate,
    /// with `ε_t` clamped to `1/(2S)` for a capped perfect round.
    pub fn training_error_bound(&self, num_samples: usize) -> f64 {
        let eps_min = 1.0 / (2.0 * num_samples as f64);
        self.rounds
            .iter()
            .map(|r| {
                let e = r.weighted_error.max(eps_min);
                2.0 * (e * (1.0 - e)).sqrt()
            })
            .product()
    }

    /// Converts to a strong classifier with weights `alpha_sums / Σ alpha`
    /// and `T = 0` over the unit-scale dictionary.
    pub fn to_classifier(&self, dict: &Dictionary) -> Result<StrongClassifier> {
        if dict.len() != self.num_stumps {
            return Err(Error::invalid("dictionary does not match the boosting model"));
        }
        let sums = self.alpha_sums();
        let total: f64 = sums.iter().sum();
        let values = if total > 0.0 {
            sums.iter().map(|a| (a / total).clamp(0.0, 1.0)).collect()
        } else {
            vec![0.0; sums.len()]
        };
        let clf = StrongClassifier::new(
            dict.with_scale(ScaleMode::Unit),
            WeightAssignment::continuous(values)?,
            0.0,
        )?;
        Ok(clf.with_training(TrainingMeta {
            method: "adaboost".into(),
            solver: "adaboost".into(),
            lambda: None,
            seed: 0,
            kappa: None,
            boosting_rounds: Some(self.rounds.len()),
        }))
    }
}

/// `sign(Σ_t α_t h_t(x))` with `sign(0) = +1`.
pub fn predict_adaboost(model: &BoostModel, dict: &Dictionary, x: &[f64]) -> Result<Label> {
    Ok(Label::from_sign(model.margin(dict, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Sample;
    use crate::stumps::build_dictionary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_data(rng: &mut ChaCha8Rng, s: usize, m: usize) -> Dataset {
        let rows = (0..s).map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let labels = (0..s)
            .map(|_| if rng.random_bool(0.5) { Label::Positive } else { Label::Negative })
            .collect();
        Dataset::from_raw(rows, labels, true).unwrap()
    }

    #[test]
    fn alpha_closed_form() {
        assert!((alpha_for(0.25) - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((alpha_for(0.25) - 0.5493).abs() < 1e-4);
    }

    #[test]
    fn separable_stops_after_one_round() {
        let data = Dataset::new(vec![
            Sample::new(vec![0.9, 0.1], Label::Positive),
            Sample::new(vec![0.8, 0.6], Label::Positive),
            Sample::new(vec![0.1, 0.9], Label::Negative),
            Sample::new(vec![0.2, 0.3], Label::Negative),
        ])
        .unwrap();
        let dict = build_dictionary(&data, 1, ScaleMode::Unit).unwrap();
        let model = train_adaboost(&data, &dict, 10).unwrap();
        assert_eq!(model.rounds.len(), 1);
        assert_eq!(model.rounds[0].weighted_error, 0.0);
        assert!((model.rounds[0].alpha - alpha_for(1.0 / 8.0)).abs() < 1e-15);
        for s in &data {
            assert_eq!(predict_adaboost(&model, &dict, &s.features).unwrap(), s.label);
        }
    }

    #[test]
    fn empty_inputs_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let data = random_data(&mut rng, 5, 2);
        let mut dict = build_dictionary(&data, 1, ScaleMode::Unit).unwrap();
        assert!(train_adaboost(&data, &dict, 0).is_err());
        dict.stumps.clear();
        assert!(train_adaboost(&data, &dict, 3).is_err());
    }

    #[test]
    fn prediction_follows_dominant_round() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = random_data(&mut rng, 10, 2);
        let dict = build_dictionary(&data, 1, ScaleMode::Unit).unwrap();
        let x = [0.6, -0.8];
        let single = BoostModel {
            rounds: vec![BoostRound { stump: 1, alpha: 0.3, weighted_error: 0.2 }],
            num_stumps: dict.len(),
        };
        assert_eq!(predict_adaboost(&single, &dict, &x).unwrap(), dict.stumps[1].decide(&x));
        // stumps 0 and 2 are x_0 with opposite polarity; they disagree away from the threshold
        let two = BoostModel {
            rounds: vec![
                BoostRound { stump: 0, alpha: 0.9, weighted_error: 0.1 },
                BoostRound { stump: 2, alpha: 0.4, weighted_error: 0.3 },
            ],
            num_stumps: dict.len(),
        };
        if dict.stumps[0].decide(&x) != dict.stumps[2].decide(&x) {
            assert_eq!(predict_adaboost(&two, &dict, &x).unwrap(), dict.stumps[0].decide(&x));
        }
    }

    #[test]
    fn distribution_and_bound_hold_every_round() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let data = random_data(&mut rng, 30, 4);
            let dict = build_dictionary(&data, 1, ScaleMode::Unit).unwrap();
            let model = train_adaboost(&data, &dict, 10).unwrap();
            for t in 1..=model.rounds.len() {
                let m = model.truncated(t);
                let errors = data
                    .iter()
                    .filter(|s| predict_adaboost(&m, &dict, &s.features).unwrap() != s.label)
                    .count();
                let rate = errors as f64 / data.len() as f64;
                assert!(rate <= m.training_error_bound(data.len()) + 1e-12);
            }
        }
    }

    #[test]
    fn converted_classifier_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data = random_data(&mut rng, 40, 3);
        let dict = build_dictionary(&data, 1, ScaleMode::Unit).unwrap();
        let model = train_adaboost(&data, &dict, 8).unwrap();
        let clf = model.to_classifier(&dict).unwrap();
        assert_eq!(clf.threshold, 0.0);
        assert_eq!(clf.active_count(), model.distinct_stumps());
        let total: f64 = model.alpha_sums().iter().sum();
        for s in &data {
            // re-summation oracle
            let m: f64 = model
                .rounds
                .iter()
                .map(|r| r.alpha * dict.stumps[r.stump].decide(&s.features).sign())
                .sum();
            assert!((clf.margin(&s.features).unwrap() * total - m).abs() < 1e-9);
            if m.abs() > 1e-9 {
                assert_eq!(clf.predict(&s.features).unwrap(), Label::from_sign(m));
            }
        }
    }
}
