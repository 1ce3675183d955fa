use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LocalObjective, SolveResult};
use crate::error::{Error, Result};

/// Exponential cooling: the temperature is multiplied by `cooling_factor`
/// after every `steps_per_temperature` proposals, from `t_initial` until it
/// drops below `t_final`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t_initial: f64,
    pub cooling_factor: f64,
    pub steps_per_temperature: usize,
    pub t_final: f64,
}

impl AnnealSchedule {
    pub fn new(
        t_initial: f64,
        cooling_factor: f64,
        steps_per_temperature: usize,
        t_final: f64,
    ) -> Result<Self> {
        let s = AnnealSchedule {
            t_initial,
            cooling_factor,
            steps_per_temperature,
            t_final,
        };
        s.validate()?;
        Ok(s)
    }

    /// `t_initial = loss_scale`, cooling 0.97, `20·V` steps per level,
    /// `t_final = 1e-3`.
    pub fn default_for(loss_scale: f64, num_vars: usize) -> Self {
        AnnealSchedule {
            t_initial: loss_scale.max(2e-3),
            cooling_factor: 0.97,
            steps_per_temperature: 20 * num_vars.max(1),
            t_final: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_initial > 0.0 && self.t_initial.is_finite()) {
            return Err(Error::invalid("t_initial must be positive and finite"));
        }
        if !(self.t_final > 0.0 && self.t_final < self.t_initial) {
            return Err(Error::invalid("t_final must be in (0, t_initial)"));
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::invalid("cooling_factor must be in (0, 1)"));
        }
        if self.steps_per_temperature == 0 {
            return Err(Error::invalid("steps_per_temperature must be at least 1"));
        }
        Ok(())
    }

    /// Number of temperature levels visited.
    pub fn num_levels(&self) -> usize {
        let mut t = self.t_initial;
        let mut n = 0;
        while t >= self.t_final {
            n += 1;
            t *= self.cooling_factor;
        }
        n
    }
}

/// Simulated annealing with Metropolis acceptance of single-bit flips.
/// Starts from a random bit vector and returns the best state seen.
pub fn solve_anneal<O: LocalObjective + ?Sized>(
    objective: &O,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<SolveResult> {
    schedule.validate()?;
    let start = Instant::now();
    let v = objective.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<u8> = (0..v).map(|_| u8::from(rng.random_bool(0.5))).collect();
    let mut tracker = objective.tracker(&bits);
    let mut current = objective.energy(&bits);
    let mut best = current;
    let mut best_bits = bits.clone();
    let mut evaluations = 1u64;
    let mut trace = Vec::with_capacity(schedule.num_levels());

    if v > 0 {
        let mut t = schedule.t_initial;
        while t >= schedule.t_final {
            for _ in 0..schedule.steps_per_temperature {
                let k = rng.random_range(0..v);
                let delta = objective.flip_delta(&tracker, &bits, k);
                evaluations += 1;
                let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp();
                if accept {
                    objective.flip(&mut tracker, &mut bits, k);
                    current += delta;
                    if current < best {
                        best = current;
                        best_bits.copy_from_slice(&bits);
                    }
                }
            }
            trace.push(best);
            t *= schedule.cooling_factor;
        }
    }

    Ok(SolveResult {
        best_energy: objective.energy(&best_bits),
        best_bits,
        evaluations,
        wall_time: start.elapsed(),
        seed,
        trace: Some(trace),
    })
}
