//! Binary minimizers: exhaustive enumeration (the reference oracle), simulated
//! annealing, and multi-start tabu search.

use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;

mod anneal;
mod exhaustive;
mod tabu;
mod zero_one;

pub use anneal::{solve_anneal, AnnealSchedule};
pub use exhaustive::{solve_exhaustive, MAX_EXHAUSTIVE_VARS};
pub use tabu::{solve_tabu, QuboTracker, TabuConfig};
pub use zero_one::ZeroOneProblem;

/// A function of a bit vector to be minimized. Implementations must be safe
/// for concurrent read-only use.
pub trait Objective: Sync {
    fn num_vars(&self) -> usize;
    fn energy(&self, bits: &[u8]) -> f64;
}

/// An objective with incremental single-flip energy deltas.
pub trait LocalObjective: Objective {
    type Tracker: Clone;

    fn tracker(&self, bits: &[u8]) -> Self::Tracker;

    /// Energy change from flipping `var` in `bits`.
    fn flip_delta(&self, tracker: &Self::Tracker, bits: &[u8], var: usize) -> f64;

    /// Flips `var` in `bits` and updates the tracker.
    fn flip(&self, tracker: &mut Self::Tracker, bits: &mut [u8], var: usize);
}

/// Adapts a closure to [`Objective`]; deltas are computed by re-evaluation.
pub struct FnObjective<F> {
    num_vars: usize,
    f: F,
}

impl<F: Fn(&[u8]) -> f64 + Sync> FnObjective<F> {
    pub fn new(num_vars: usize, f: F) -> Self {
        FnObjective { num_vars, f }
    }
}

impl<F: Fn(&[u8]) -> f64 + Sync> Objective for FnObjective<F> {
    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn energy(&self, bits: &[u8]) -> f64 {
        (self.f)(bits)
    }
}

impl<F: Fn(&[u8]) -> f64 + Sync> LocalObjective for FnObjective<F> {
    /// Current energy.
    type Tracker = f64;

    fn tracker(&self, bits: &[u8]) -> f64 {
        (self.f)(bits)
    }

    fn flip_delta(&self, current: &f64, bits: &[u8], var: usize) -> f64 {
        let mut next = bits.to_vec();
        next[var] ^= 1;
        (self.f)(&next) - current
    }

    fn flip(&self, current: &mut f64, bits: &mut [u8], var: usize) {
        bits[var] ^= 1;
        *current = (self.f)(bits);
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveResult {
    pub best_bits: Vec<u8>,
    pub best_energy: f64,
    pub evaluations: u64,
    pub wall_time: Duration,
    pub seed: u64,
    /// Best energy seen so far, one entry per temperature level (annealing)
    /// or per start (tabu).
    pub trace: Option<Vec<f64>>,
}

/// Equality ignores `wall_time`.
impl PartialEq for SolveResult {
    fn eq(&self, other: &Self) -> bool {
        self.best_bits == other.best_bits
            && self.best_energy.to_bits() == other.best_energy.to_bits()
            && self.evaluations == other.evaluations
            && self.seed == other.seed
            && self.trace == other.trace
    }
}

impl SolveResult {
    /// Writes the trace as CSV with columns `iteration,best_energy`.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["iteration", "best_energy"])
            .map_err(std::io::Error::from)?;
        for (k, e) in self.trace.iter().flatten().enumerate() {
            w.write_record([k.to_string(), e.to_string()])
                .map_err(std::io::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_csv_layout() {
        let r = SolveResult {
            best_bits: vec![1],
            best_energy: -1.0,
            evaluations: 3,
            wall_time: Duration::ZERO,
            seed: 0,
            trace: Some(vec![0.0, -1.0]),
        };
        let mut buf = Vec::new();
        r.write_trace_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "iteration,best_energy\n0,0\n1,-1\n");
    }

    #[test]
    fn equality_ignores_wall_time() {
        let mut a = SolveResult {
            best_bits: vec![0, 1],
            best_energy: 2.0,
            evaluations: 4,
            wall_time: Duration::from_millis(1),
            seed: 9,
            trace: None,
        };
        let b = SolveResult {
            wall_time: Duration::from_secs(3),
            ..a.clone()
        };
        assert_eq!(a, b);
        a.seed = 1;
        assert_ne!(a, b);
    }
}
