use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LocalObjective, Objective, SolveResult};
use crate::error::{Error, Result};
use crate::objective::QuboProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabuConfig {
    pub num_starts: usize,
    pub tabu_tenure: usize,
    pub max_iterations_per_start: usize,
    pub aspiration: bool,
}

impl TabuConfig {
    /// 32 starts, tenure `max(8, V/10)`, `500·V` iterations per start.
    pub fn default_for(num_vars: usize) -> Self {
        TabuConfig {
            num_starts: 32,
            tabu_tenure: (num_vars / 10).max(8),
            max_iterations_per_start: 500 * num_vars.max(1),
            aspiration: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_starts == 0 || self.tabu_tenure == 0 || self.max_iterations_per_start == 0 {
            return Err(Error::invalid("tabu counts must all be at least 1"));
        }
        Ok(())
    }
}

/// Local fields `g_k = Σ_{j≠k} Q_kj·v_j`, from which a flip of `k` changes
/// the energy by `(1 − 2v_k)·(Q_kk + 2·g_k)`.
#[derive(Clone, Debug)]
pub struct QuboTracker {
    field: Vec<f64>,
}

impl Objective for QuboProblem {
    fn num_vars(&self) -> usize {
        QuboProblem::num_vars(self)
    }

    fn energy(&self, bits: &[u8]) -> f64 {
        QuboProblem::energy(self, bits)
    }
}

impl LocalObjective for QuboProblem {
    type Tracker = QuboTracker;

    fn tracker(&self, bits: &[u8]) -> QuboTracker {
        let v = QuboProblem::num_vars(self);
        let field = (0..v)
            .map(|k| {
                let row = self.row(k);
                (0..v)
                    .filter(|&j| j != k && bits[j] != 0)
                    .map(|j| row[j])
                    .sum()
            })
            .collect();
        QuboTracker { field }
    }

    #[inline]
    fn flip_delta(&self, t: &QuboTracker, bits: &[u8], k: usize) -> f64 {
        let dir = if bits[k] == 0 { 1.0 } else { -1.0 };
        dir * (self.get(k, k) + 2.0 * t.field[k])
    }

    fn flip(&self, t: &mut QuboTracker, bits: &mut [u8], k: usize) {
        let dir = if bits[k] == 0 { 1.0 } else { -1.0 };
        bits[k] ^= 1;
        for (j, (f, q)) in t.field.iter_mut().zip(self.row(k)).enumerate() {
            if j != k {
                *f += dir * q;
            }
        }
    }
}

struct StartOutcome {
    bits: Vec<u8>,
    energy: f64,
    evaluations: u64,
}

fn run_start(problem: &QuboProblem, config: &TabuConfig, seed: u64) -> StartOutcome {
    let v = problem.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<u8> = (0..v).map(|_| u8::from(rng.random_bool(0.5))).collect();
    let mut tracker = problem.tracker(&bits);
    let mut current = problem.energy(&bits);
    let mut best = current;
    let mut best_bits = bits.clone();
    let mut tabu_until = vec![0usize; v];
    let mut evaluations = 1u64;

    for iter in 0..config.max_iterations_per_start {
        let mut chosen: Option<(usize, f64)> = None;
        let mut fallback: Option<(usize, f64)> = None;
        for k in 0..v {
            let delta = problem.flip_delta(&tracker, &bits, k);
            if fallback.is_none_or(|(_, d)| delta < d) {
                fallback = Some((k, delta));
            }
            let allowed = tabu_until[k] <= iter
                || (config.aspiration && current + delta < best);
            if allowed && chosen.is_none_or(|(_, d)| delta < d) {
                chosen = Some((k, delta));
            }
        }
        evaluations += v as u64;
        // every variable tabu and none aspirated: take the best move anyway
        let Some((k, delta)) = chosen.or(fallback) else {
            break;
        };
        problem.flip(&mut tracker, &mut bits, k);
        current += delta;
        tabu_until[k] = iter + 1 + config.tabu_tenure;
        if current < best {
            best = current;
            best_bits.copy_from_slice(&bits);
        }
        #[cfg(debug_assertions)]
        if iter % 512 == 0 {
            let full = problem.energy(&bits);
            debug_assert!(
                (full - current).abs() <= 1e-9 * (1.0 + full.abs() + problem.max_abs_diagonal()),
                "incremental energy {current} drifted from {full}"
            );
        }
    }
    StartOutcome {
        energy: problem.energy(&best_bits),
        bits: best_bits,
        evaluations,
    }
}

/// Multi-start tabu search over single-bit flips. Start `k` begins from a
/// random vector seeded with `seed ^ k`; each iteration takes the best
/// non-tabu flip (steepest descent or mildest ascent), and a tabu flip is
/// allowed when it would beat the start's best energy. Starts are
/// independent, so the result does not depend on how they are scheduled.
pub fn solve_tabu(problem: &QuboProblem, config: &TabuConfig, seed: u64) -> Result<SolveResult> {
    config.validate()?;
    let start = Instant::now();
    let outcomes: Vec<StartOutcome> = (0..config.num_starts)
        .into_par_iter()
        .map(|k| run_start(problem, config, seed ^ k as u64))
        .collect();

    let mut trace = Vec::with_capacity(outcomes.len());
    let mut best_idx = 0;
    for (k, o) in outcomes.iter().enumerate() {
        if o.energy < outcomes[best_idx].energy {
            best_idx = k;
        }
        trace.push(outcomes[best_idx].energy);
    }
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best = outcomes.into_iter().nth(best_idx).expect("at least one start");
    Ok(SolveResult {
        best_bits: best.bits,
        best_energy: best.energy,
        evaluations,
        wall_time: start.elapsed(),
        seed,
        trace: Some(trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_qubo(rng: &mut ChaCha8Rng, v: usize) -> QuboProblem {
        let mut q = vec![0.0; v * v];
        for i in 0..v {
            for j in i..v {
                let x: f64 = rng.random_range(-1.0..1.0);
                q[i * v + j] = x;
                q[j * v + i] = x;
            }
        }
        QuboProblem::from_matrix(v, q).unwrap()
    }

    #[test]
    fn separable_diagonal() {
        let p = QuboProblem::from_matrix(3, vec![-1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0]).unwrap();
        let r = solve_tabu(&p, &TabuConfig::default_for(3), 5).unwrap();
        assert_eq!(r.best_bits, vec![1, 1, 1]);
        assert_eq!(r.best_energy, -3.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_qubo(&mut rng, 20);
        let cfg = TabuConfig {
            num_starts: 4,
            ..TabuConfig::default_for(20)
        };
        assert_eq!(solve_tabu(&p, &cfg, 77).unwrap(), solve_tabu(&p, &cfg, 77).unwrap());
    }

    #[test]
    fn incremental_deltas_track_full_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_qubo(&mut rng, 15);
        let mut bits: Vec<u8> = (0..15).map(|_| u8::from(rng.random_bool(0.5))).collect();
        let mut t = p.tracker(&bits);
        let mut e = p.energy(&bits);
        for _ in 0..500 {
            let k = rng.random_range(0..15);
            let d = p.flip_delta(&t, &bits, k);
            p.flip(&mut t, &mut bits, k);
            e += d;
            assert!((e - p.energy(&bits)).abs() < 1e-9);
        }
    }

    #[test]
    fn multi_start_is_at_least_as_good_as_each_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_qubo(&mut rng, 30);
        let cfg = TabuConfig {
            num_starts: 6,
            tabu_tenure: 5,
            max_iterations_per_start: 200,
            aspiration: true,
        };
        let seed = 1234;
        let r = solve_tabu(&p, &cfg, seed).unwrap();
        for k in 0..6u64 {
            let single = TabuConfig { num_starts: 1, ..cfg };
            // start k of the multi-start run equals a one-start run seeded with seed ^ k
            let one = solve_tabu(&p, &single, seed ^ k).unwrap();
            assert!(r.best_energy <= one.best_energy);
        }
        assert_eq!(r.best_energy, p.energy(&r.best_bits));
    }

    #[test]
    fn invalid_config_rejected() {
        let p = QuboProblem::from_matrix(1, vec![1.0]).unwrap();
        let cfg = TabuConfig {
            num_starts: 0,
            ..TabuConfig::default_for(1)
        };
        assert!(solve_tabu(&p, &cfg, 0).is_err());
    }
}
