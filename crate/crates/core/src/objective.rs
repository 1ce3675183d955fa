//! Training objectives: 0-1 loss and quadratic loss with 0-norm
//! regularization, and the QUBO form of the quadratic loss.
//!
//! The QUBO energy of a bit vector `v` is `vᵀQv` over the full symmetric
//! matrix: an interaction `α·v_a·v_b` is stored as `α/2` in both `Q[a][b]` and
//! `Q[b][a]`, and linear terms sit on the diagonal (`v² = v`). The constant
//! `Σ_s y_s² = S` is dropped from `Q` and kept in [`QuboProblem::offset`].

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::stumps::Dictionary;
use crate::weights::{max_level, num_encoded_bits, WeightAssignment};

/// Stump outputs `h_i(x_s)` at the dictionary's active scale, with labels.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseTable {
    h: Vec<f64>,
    y: Vec<f64>,
    num_samples: usize,
    num_stumps: usize,
}

impl ResponseTable {
    pub fn new(dict: &Dictionary, data: &Dataset) -> Result<Self> {
        if dict.dim != data.dim() {
            return Err(Error::DimensionMismatch {
                expected: dict.dim,
                got: data.dim(),
            });
        }
        let mut h = Vec::with_capacity(data.len() * dict.len());
        for s in data {
            h.extend(dict.stumps.iter().map(|st| st.output(&s.features)));
        }
        Ok(ResponseTable {
            h,
            y: data.iter().map(|s| s.label.sign()).collect(),
            num_samples: data.len(),
            num_stumps: dict.len(),
        })
    }

    /// Builds a table directly from an `S×N` row-major response matrix.
    pub fn from_parts(h: Vec<f64>, y: Vec<f64>, num_stumps: usize) -> Result<Self> {
        if num_stumps == 0 || h.len() != y.len() * num_stumps {
            return Err(Error::invalid(format!(
                "response matrix of {} entries does not match {} samples x {} stumps",
                h.len(),
                y.len(),
                num_stumps
            )));
        }
        Ok(ResponseTable {
            num_samples: y.len(),
            h,
            y,
            num_stumps,
        })
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn num_stumps(&self) -> usize {
        self.num_stumps
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.h[s * self.num_stumps..(s + 1) * self.num_stumps]
    }

    pub fn labels(&self) -> &[f64] {
        &self.y
    }

    /// `Corr(h_i, h_j) = Σ_s h_i(x_s)·h_j(x_s)`, row-major `N×N`.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.num_stumps;
        let mut g = vec![0.0; n * n];
        for s in 0..self.num_samples {
            let row = self.row(s);
            for i in 0..n {
                let hi = row[i];
                let gi = &mut g[i * n..(i + 1) * n];
                for (gij, hj) in gi[i..].iter_mut().zip(&row[i..]) {
                    *gij += hi * hj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                g[i * n + j] = g[j * n + i];
            }
        }
        g
    }

    /// `Corr(h_i, y) = Σ_s h_i(x_s)·y_s`.
    pub fn label_correlation(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_stumps];
        for s in 0..self.num_samples {
            let y = self.y[s];
            for (ci, h) in c.iter_mut().zip(self.row(s)) {
                *ci += h * y;
            }
        }
        c
    }

    /// Strong-classifier responses `Σ_i w_i h_i(x_s)` for every sample.
    pub fn responses(&self, weights: &[f64]) -> Vec<f64> {
        (0..self.num_samples)
            .map(|s| {
                self.row(s)
                    .iter()
                    .zip(weights)
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(h, w)| h * w)
                    .sum()
            })
            .collect()
    }

    fn check_weights(&self, w: &WeightAssignment) -> Result<()> {
        if w.len() != self.num_stumps {
            return Err(Error::DimensionMismatch {
                expected: self.num_stumps,
                got: w.len(),
            });
        }
        Ok(())
    }
}

/// `Σ_s H(−y_s·Σ_i w_i h_i(x_s)) + λ‖w‖₀` with `H(0) = 1`: a zero margin
/// counts as an error.
///
/// Fixed-point weights are evaluated on their integer levels and the signs of
/// `h`, so exact-zero margins are detected without rounding error.
pub fn zero_one_objective(w: &WeightAssignment, table: &ResponseTable, lambda: f64) -> Result<f64> {
    table.check_weights(w)?;
    let errors = match w.levels() {
        Some(levels) => (0..table.num_samples)
            .filter(|&s| {
                let m: i64 = table
                    .row(s)
                    .iter()
                    .zip(&levels)
                    .map(|(h, &l)| if *h >= 0.0 { i64::from(l) } else { -i64::from(l) })
                    .sum();
                if table.y[s] > 0.0 {
                    m <= 0
                } else {
                    m >= 0
                }
            })
            .count(),
        None => table
            .responses(w.values())
            .iter()
            .zip(&table.y)
            .filter(|(m, y)| *m * *y <= 0.0)
            .count(),
    };
    Ok(errors as f64 + lambda * w.active_count() as f64)
}

/// Unregularized squared loss `Σ_s (Σ_i w_i h_i(x_s) − y_s)²`.
pub fn quadratic_loss(w: &WeightAssignment, table: &ResponseTable) -> Result<f64> {
    table.check_weights(w)?;
    Ok(table
        .responses(w.values())
        .iter()
        .zip(&table.y)
        .map(|(m, y)| (m - y) * (m - y))
        .sum())
}

/// `Σ_s (Σ_i w_i h_i(x_s) − y_s)² + λ‖w‖₀`.
pub fn quadratic_objective(w: &WeightAssignment, table: &ResponseTable, lambda: f64) -> Result<f64> {
    Ok(quadratic_loss(w, table)? + lambda * w.active_count() as f64)
}

/// Auxiliary-bit regularizer `Σ_i κ·w_i·(1 − aux_i) + λ·aux_i` (`d > 1`).
pub fn aux_penalty(w: &WeightAssignment, lambda: f64, kappa: f64) -> Option<f64> {
    let aux = w.aux_bits()?;
    Some(
        w.values()
            .iter()
            .zip(aux)
            .map(|(&wi, &a)| kappa * wi * f64::from(1 - a) + lambda * f64::from(a))
            .sum(),
    )
}

/// Role of one QUBO variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarRole {
    WeightBit { weight: usize, bit: u32 },
    Aux { weight: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuboProblem {
    num_vars: usize,
    q: Vec<f64>,
    layout: Vec<VarRole>,
    offset: f64,
    lambda: f64,
    kappa: Option<f64>,
    bit_depth: u32,
    num_weights: usize,
}

/// Default auxiliary-bit penalty: `10·(λ + max_i |Q_ii|)` over the single-bit
/// diagonal `Σ_s h_i² + λ − 2·Corr(h_i, y)`.
pub fn default_kappa(table: &ResponseTable, lambda: f64) -> f64 {
    let corr = table.label_correlation();
    let max_diag = (0..table.num_stumps)
        .map(|i| {
            let self_term: f64 = (0..table.num_samples).map(|s| table.row(s)[i].powi(2)).sum();
            (self_term + lambda - 2.0 * corr[i]).abs()
        })
        .fold(0.0, f64::max);
    10.0 * (lambda + max_diag)
}

/// Builds the QUBO for the quadratic loss.
///
/// For `d = 1`: `Q_ij = Corr(h_i, h_j)` off the diagonal and
/// `Q_ii = Σ_s h_i(x_s)² + λ − 2·Corr(h_i, y)` (which is `S/N² + λ − 2·Corr(h_i, y)`
/// at scale `1/N`). For `d > 1` each weight is replaced by its fixed-point
/// expansion `w_i = Σ_b c_b·v_{i,b}`, `c_b = 2^b/(2^d − 1)`, and the 0-norm by
/// `Σ_i κ·w_i·(1 − aux_i) + λ·aux_i`. `kappa = None` selects [`default_kappa`].
pub fn build_qubo(
    table: &ResponseTable,
    lambda: f64,
    bit_depth: u32,
    kappa: Option<f64>,
) -> Result<QuboProblem> {
    if bit_depth == 0 || bit_depth > crate::weights::MAX_BIT_DEPTH {
        return Err(Error::invalid(format!("unsupported bit depth {bit_depth}")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be a finite value >= 0, got {lambda}")));
    }
    let n = table.num_stumps;
    let d = bit_depth as usize;
    let gram = table.gram();
    let corr = table.label_correlation();
    let num_vars = num_encoded_bits(n, bit_depth, true);
    let mut q = vec![0.0; num_vars * num_vars];
    let mut layout = Vec::with_capacity(num_vars);

    if bit_depth == 1 {
        for i in 0..n {
            layout.push(VarRole::WeightBit { weight: i, bit: 0 });
            for j in 0..n {
                q[i * n + j] = gram[i * n + j];
            }
            q[i * n + i] = gram[i * n + i] + lambda - 2.0 * corr[i];
        }
        return Ok(QuboProblem {
            num_vars,
            q,
            layout,
            offset: table.num_samples as f64,
            lambda,
            kappa: None,
            bit_depth,
            num_weights: n,
        });
    }

    let kappa = kappa.unwrap_or_else(|| default_kappa(table, lambda));
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!("kappa must be positive for multi-bit weights, got {kappa}")));
    }
    if kappa <= lambda {
        log::warn!("kappa {kappa} <= lambda {lambda}: auxiliary bits may not act as indicators");
    }
    let top = f64::from(max_level(bit_depth));
    let coef: Vec<f64> = (0..d).map(|b| f64::from(1u32 << b) / top).collect();
    let var = |i: usize, b: usize| i * d + b;
    let aux = |i: usize| n * d + i;

    for i in 0..n {
        for b in 0..d {
            layout.push(VarRole::WeightBit { weight: i, bit: b as u32 });
        }
    }
    for i in 0..n {
        layout.push(VarRole::Aux { weight: i });
    }

    // Loss: Σ_ij w_i w_j G_ij − 2 Σ_i w_i r_i, expanded over bits.
    for i in 0..n {
        for j in 0..n {
            let g = gram[i * n + j];
            for b in 0..d {
                for b2 in 0..d {
                    q[var(i, b) * num_vars + var(j, b2)] += coef[b] * coef[b2] * g;
                }
            }
        }
        for b in 0..d {
            let v = var(i, b);
            q[v * num_vars + v] += -2.0 * coef[b] * corr[i] + kappa * coef[b];
            // −κ·c_b·v_{i,b}·aux_i, split across both halves
            let a = aux(i);
            q[v * num_vars + a] -= kappa * coef[b] / 2.0;
            q[a * num_vars + v] -= kappa * coef[b] / 2.0;
        }
        let a = aux(i);
        q[a * num_vars + a] += lambda;
    }

    Ok(QuboProblem {
        num_vars,
        q,
        layout,
        offset: table.num_samples as f64,
        lambda,
        kappa: Some(kappa),
        bit_depth,
        num_weights: n,
    })
}

impl QuboProblem {
    /// Wraps an explicit matrix with single-bit layout and zero offset.
    pub fn from_matrix(num_vars: usize, q: Vec<f64>) -> Result<Self> {
        if q.len() != num_vars * num_vars {
            return Err(Error::invalid(format!(
                "matrix has {} entries, expected {}",
                q.len(),
                num_vars * num_vars
            )));
        }
        for i in 0..num_vars {
            for j in 0..i {
                if q[i * num_vars + j] != q[j * num_vars + i] {
                    return Err(Error::invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(QuboProblem {
            num_vars,
            q,
            layout: (0..num_vars)
                .map(|i| VarRole::WeightBit { weight: i, bit: 0 })
                .collect(),
            offset: 0.0,
            lambda: 0.0,
            kappa: None,
            bit_depth: 1,
            num_weights: num_vars,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_weights(&self) -> usize {
        self.num_weights
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa(&self) -> Option<f64> {
        self.kappa
    }

    pub fn layout(&self) -> &[VarRole] {
        &self.layout
    }

    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.num_vars + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.q[i * self.num_vars..(i + 1) * self.num_vars]
    }

    /// `vᵀQv`.
    pub fn energy(&self, bits: &[u8]) -> f64 {
        debug_assert_eq!(bits.len(), self.num_vars);
        let ones: Vec<usize> = (0..self.num_vars).filter(|&i| bits[i] != 0).collect();
        ones.iter()
            .map(|&i| {
                let row = self.row(i);
                ones.iter().map(|&j| row[j]).sum::<f64>()
            })
            .sum()
    }

    /// Decodes a solution into weights.
    pub fn decode(&self, bits: &[u8]) -> Result<WeightAssignment> {
        if bits.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: bits.len(),
            });
        }
        WeightAssignment::from_bits(bits, self.num_weights, self.bit_depth)
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        (0..self.num_vars).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    /// Writes the plain-text sparse form: a header line `V num_nonzeros offset`
    /// followed by one `i j value` line per nonzero entry of the full
    /// symmetric matrix, row-major.
    pub fn write_sparse<W: Write>(&self, mut out: W) -> Result<()> {
        let nnz = self.q.iter().filter(|v| **v != 0.0).count();
        writeln!(out, "{} {} {}", self.num_vars, nnz, self.offset)?;
        for i in 0..self.num_vars {
            for (j, v) in self.row(i).iter().enumerate() {
                if *v != 0.0 {
                    writeln!(out, "{i} {j} {v}")?;
                }
            }
        }
        Ok(())
    }

    pub fn to_sparse_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_sparse(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("sparse format is ASCII")
    }
}

/// A QUBO read back from the sparse text format.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseQubo {
    pub num_vars: usize,
    pub offset: f64,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseQubo {
    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate().filter_map(|(k, l)| match l {
            Ok(l) if l.trim().is_empty() => None,
            other => Some((k + 1, other)),
        });
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "missing header".into()))?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line_no, format!("expected `V num_nonzeros offset`, got `{header}`")));
        }
        let num_vars: usize = fields[0].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
        let nnz: usize = fields[1].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
        let offset: f64 = fields[2].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
        let mut entries = Vec::with_capacity(nnz);
        for (line_no, line) in lines {
            let line = line?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(parse_err(line_no, format!("expected `i j value`, got `{line}`")));
            }
            let i: usize = f[0].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
            let j: usize = f[1].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
            let v: f64 = f[2].parse().map_err(|e| parse_err(line_no, format!("{e}")))?;
            if i >= num_vars || j >= num_vars {
                return Err(parse_err(line_no, format!("index ({i}, {j}) out of range for {num_vars} variables")));
            }
            entries.push((i, j, v));
        }
        if entries.len() != nnz {
            return Err(parse_err(0, format!("header announces {nnz} entries, found {}", entries.len())));
        }
        Ok(SparseQubo {
            num_vars,
            offset,
            entries,
        })
    }

    pub fn energy(&self, bits: &[u8]) -> f64 {
        self.entries
            .iter()
            .filter(|(i, j, _)| bits[*i] != 0 && bits[*j] != 0)
            .map(|(_, _, v)| v)
            .sum()
    }
}

/// True iff every auxiliary bit equals `[w_i > 0]`. Single-bit problems have
/// no auxiliary bits and are trivially consistent.
pub fn indicator_consistency_check(bits: &[u8], problem: &QuboProblem) -> Result<bool> {
    let w = problem.decode(bits)?;
    let Some(aux) = w.aux_bits() else {
        return Ok(true);
    };
    Ok(w.values()
        .iter()
        .zip(aux)
        .all(|(&v, &a)| (a == 1) == (v > 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_table(rng: &mut ChaCha8Rng, s: usize, n: usize) -> ResponseTable {
        let scale = 1.0 / n as f64;
        let h = (0..s * n)
            .map(|_| if rng.random_bool(0.5) { scale } else { -scale })
            .collect();
        let y = (0..s).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
        ResponseTable::from_parts(h, y, n).unwrap()
    }

    fn random_bits(rng: &mut ChaCha8Rng, v: usize) -> Vec<u8> {
        (0..v).map(|_| u8::from(rng.random_bool(0.5))).collect()
    }

    #[test]
    fn hand_computed_two_stump_qubo() {
        // N = 2, S = 2, both stumps always agree with the labels.
        let h = vec![0.5, 0.5, -0.5, -0.5];
        let table = ResponseTable::from_parts(h, vec![1.0, -1.0], 2).unwrap();
        assert_eq!(table.label_correlation(), vec![1.0, 1.0]);
        let lambda = 0.3;
        let p = build_qubo(&table, lambda, 1, None).unwrap();
        assert!((p.get(0, 0) - (2.0 / 4.0 + lambda - 2.0)).abs() < 1e-15);
        assert_eq!(p.get(0, 1), 0.5);
        assert_eq!(p.get(1, 0), 0.5);
        assert_eq!(p.offset(), 2.0);
    }

    #[test]
    fn zero_weights_objectives() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let table = random_table(&mut rng, 7, 4);
        let w = WeightAssignment::zeros(4, 1).unwrap();
        assert_eq!(zero_one_objective(&w, &table, 0.5).unwrap(), 7.0);
        assert_eq!(quadratic_objective(&w, &table, 0.5).unwrap(), 7.0);
        let p = build_qubo(&table, 0.0, 1, None).unwrap();
        assert_eq!(p.energy(&[0; 4]) + p.offset(), quadratic_objective(&w, &table, 0.0).unwrap());
    }

    #[test]
    fn single_perfect_stump() {
        let table = ResponseTable::from_parts(vec![1.0], vec![1.0], 1).unwrap();
        let w = WeightAssignment::from_bits(&[1], 1, 1).unwrap();
        assert_eq!(quadratic_objective(&w, &table, 0.0).unwrap(), 0.0);
        // separating stump on 3 samples, others zero
        let h = vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0];
        let table = ResponseTable::from_parts(h, vec![1.0, -1.0, 1.0], 2).unwrap();
        let w = WeightAssignment::from_bits(&[1, 0], 2, 1).unwrap();
        assert_eq!(zero_one_objective(&w, &table, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn zero_one_matches_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let table = random_table(&mut rng, 5, 4);
            let bits = random_bits(&mut rng, 8);
            let w = WeightAssignment::from_bits(&bits, 4, 2).unwrap();
            let lambda = 0.25;
            // direct per-sample recount in level units
            let levels = w.levels().unwrap();
            let mut errors = 0;
            for s in 0..5 {
                let mut m = 0i64;
                for i in 0..4 {
                    let sign = if table.row(s)[i] > 0.0 { 1 } else { -1 };
                    m += sign * levels[i] as i64;
                }
                if (table.labels()[s] as i64) * m <= 0 {
                    errors += 1;
                }
            }
            let active = levels.iter().filter(|&&l| l > 0).count();
            let expected = errors as f64 + lambda * active as f64;
            assert_eq!(zero_one_objective(&w, &table, lambda).unwrap(), expected);
        }
    }

    #[test]
    fn qubo_energy_identity_all_depths() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for d in 1..=3u32 {
            for _ in 0..10 {
                let n = rng.random_range(1..=8);
                let s = rng.random_range(1..=20);
                let table = random_table(&mut rng, s, n);
                let lambda = rng.random_range(0.0..0.5);
                let p = build_qubo(&table, lambda, d, None).unwrap();
                for _ in 0..200 {
                    let bits = random_bits(&mut rng, p.num_vars());
                    let w = p.decode(&bits).unwrap();
                    let reg = match aux_penalty(&w, lambda, p.kappa().unwrap_or(0.0)) {
                        Some(pen) => pen,
                        None => lambda * w.active_count() as f64,
                    };
                    let direct = quadratic_loss(&w, &table).unwrap() + reg;
                    let via_qubo = p.energy(&bits) + p.offset();
                    assert!((direct - via_qubo).abs() < 1e-9, "d={d}: {direct} vs {via_qubo}");
                }
            }
        }
    }

    #[test]
    fn qubo_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let table = random_table(&mut rng, 12, 5);
        for d in 1..=3 {
            let p = build_qubo(&table, 0.1, d, None).unwrap();
            let v = p.num_vars();
            for i in 0..v {
                for j in 0..v {
                    assert!((p.get(i, j) - p.get(j, i)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn kappa_must_be_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let table = random_table(&mut rng, 3, 2);
        assert!(build_qubo(&table, 0.1, 2, Some(0.0)).is_err());
        assert!(build_qubo(&table, 0.1, 2, Some(-1.0)).is_err());
        // ignored for single-bit problems
        assert!(build_qubo(&table, 0.1, 1, Some(-1.0)).is_ok());
    }

    #[test]
    fn indicator_check_basic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let table = random_table(&mut rng, 4, 3);
        let p = build_qubo(&table, 0.1, 2, None).unwrap();
        assert!(indicator_consistency_check(&vec![0; p.num_vars()], &p).unwrap());
        let mut bits = vec![0; p.num_vars()];
        bits[0] = 1; // w_0 > 0, aux_0 = 0
        assert!(!indicator_consistency_check(&bits, &p).unwrap());
        bits[6] = 1;
        assert!(indicator_consistency_check(&bits, &p).unwrap());
    }

    #[test]
    fn sparse_round_trip_preserves_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let table = random_table(&mut rng, 9, 4);
        let p = build_qubo(&table, 0.2, 2, None).unwrap();
        let text = p.to_sparse_string();
        let back = SparseQubo::read(text.as_bytes()).unwrap();
        assert_eq!(back.num_vars, p.num_vars());
        assert_eq!(back.offset, p.offset());
        for _ in 0..50 {
            let bits = random_bits(&mut rng, p.num_vars());
            assert!((back.energy(&bits) - p.energy(&bits)).abs() < 1e-12);
        }
    }

    #[test]
    fn sparse_parse_errors_name_the_line() {
        let err = SparseQubo::read("2 1 0\n0 5 1.0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(SparseQubo::read("2 2 0\n0 0 1.0\n".as_bytes()).is_err());
    }
}
