use super::{LocalObjective, Objective};
use crate::error::{Error, Result};
use crate::objective::ResponseTable;
use crate::weights::{num_encoded_bits, WeightAssignment};

/// The regularized 0-1 loss as a function of the `N·d` weight bits.
///
/// Only the sign of each stump output matters here, so margins are kept as
/// exact integers in units of `1/(2^d − 1)`: sample `s` is correct iff
/// `Σ_i level_i·y_s·sign(h_i(x_s)) > 0`.
#[derive(Clone, Debug)]
pub struct ZeroOneProblem {
    /// `y_s·sign(h_i(x_s))`, stored per stump: `agree[i·S + s]`.
    agree: Vec<i8>,
    num_samples: usize,
    num_weights: usize,
    bit_depth: u32,
    lambda: f64,
}

#[derive(Clone, Debug)]
pub struct ZeroOneTracker {
    margins: Vec<i64>,
    levels: Vec<u32>,
}

impl ZeroOneProblem {
    pub fn new(table: &ResponseTable, lambda: f64, bit_depth: u32) -> Result<Self> {
        if bit_depth == 0 || bit_depth > crate::weights::MAX_BIT_DEPTH {
            return Err(Error::invalid(format!("unsupported bit depth {bit_depth}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!("lambda must be a finite value >= 0, got {lambda}")));
        }
        let n = table.num_stumps();
        let num_samples = table.num_samples();
        let mut agree = vec![0i8; num_samples * n];
        for (s, &y) in table.labels().iter().enumerate() {
            for (i, &h) in table.row(s).iter().enumerate() {
                agree[i * num_samples + s] = if (h >= 0.0) == (y > 0.0) { 1 } else { -1 };
            }
        }
        Ok(ZeroOneProblem {
            agree,
            num_samples,
            num_weights: n,
            bit_depth,
            lambda,
        })
    }

    pub fn num_weights(&self) -> usize {
        self.num_weights
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn decode(&self, bits: &[u8]) -> Result<WeightAssignment> {
        WeightAssignment::from_bits(bits, self.num_weights, self.bit_depth)
    }

    fn levels(&self, bits: &[u8]) -> Vec<u32> {
        let d = self.bit_depth as usize;
        (0..self.num_weights)
            .map(|i| (0..d).map(|b| u32::from(bits[i * d + b]) << b).sum())
            .collect()
    }

    fn column(&self, i: usize) -> &[i8] {
        &self.agree[i * self.num_samples..(i + 1) * self.num_samples]
    }

    fn margins(&self, levels: &[u32]) -> Vec<i64> {
        let mut m = vec![0i64; self.num_samples];
        for (i, &l) in levels.iter().enumerate() {
            if l > 0 {
                for (mv, &a) in m.iter_mut().zip(self.column(i)) {
                    *mv += i64::from(a) * i64::from(l);
                }
            }
        }
        m
    }
}

impl Objective for ZeroOneProblem {
    fn num_vars(&self) -> usize {
        num_encoded_bits(self.num_weights, self.bit_depth, false)
    }

    fn energy(&self, bits: &[u8]) -> f64 {
        let levels = self.levels(bits);
        let errors = self.margins(&levels).iter().filter(|&&m| m <= 0).count();
        let active = levels.iter().filter(|&&l| l > 0).count();
        errors as f64 + self.lambda * active as f64
    }
}

impl LocalObjective for ZeroOneProblem {
    type Tracker = ZeroOneTracker;

    fn tracker(&self, bits: &[u8]) -> ZeroOneTracker {
        let levels = self.levels(bits);
        ZeroOneTracker {
            margins: self.margins(&levels),
            levels,
        }
    }

    fn flip_delta(&self, t: &ZeroOneTracker, bits: &[u8], var: usize) -> f64 {
        let d = self.bit_depth as usize;
        let (i, b) = (var / d, var % d);
        let step: i64 = if bits[var] == 0 { 1 << b } else { -(1 << b) };
        let old_level = t.levels[i];
        let new_level = (i64::from(old_level) + step) as u32;
        let mut errors_delta = 0i64;
        for (&m, &a) in t.margins.iter().zip(self.column(i)) {
            let nm = m + step * i64::from(a);
            errors_delta += i64::from(nm <= 0) - i64::from(m <= 0);
        }
        let active_delta = i64::from(new_level > 0) - i64::from(old_level > 0);
        errors_delta as f64 + self.lambda * active_delta as f64
    }

    fn flip(&self, t: &mut ZeroOneTracker, bits: &mut [u8], var: usize) {
        let d = self.bit_depth as usize;
        let (i, b) = (var / d, var % d);
        let step: i64 = if bits[var] == 0 { 1 << b } else { -(1 << b) };
        bits[var] ^= 1;
        t.levels[i] = (i64::from(t.levels[i]) + step) as u32;
        let col = &self.agree[i * self.num_samples..(i + 1) * self.num_samples];
        for (m, &a) in t.margins.iter_mut().zip(col) {
            *m += step * i64::from(a);
        }
    }
}
