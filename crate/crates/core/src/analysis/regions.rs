//! Region counting for arrangements of diagonal hyperplanes `Σ_i c_i w_i = 0`
//! with `c ∈ {−1, +1}^N`.
//!
//! A sign pattern `σ` over the hyperplanes is a region iff the open system
//! `σ_k·(c_k·w) > 0` has a solution. Feasibility is decided by the linear
//! program `max t` subject to `σ_k·(c_k·w) ≥ t`, `w ∈ [−1, 1]^N`, `t ∈ [0, 1]`,
//! counting the pattern when `t* > 1e-9`. Patterns are explored as a prefix
//! tree so that an infeasible prefix prunes all of its extensions.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::ResponseTable;

pub const MAX_REGION_DIM: usize = 6;
pub const MAX_REGION_HYPERPLANES: usize = 31;
/// Minimum LP margin for a sign pattern to count as a region.
pub const FEASIBILITY_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementSpec {
    dim: usize,
    hyperplanes: Vec<Vec<i8>>,
}

impl ArrangementSpec {
    /// Canonicalizes each hyperplane so its first coefficient is `+1` and
    /// drops duplicates, keeping first occurrences in order.
    pub fn new(dim: usize, hyperplanes: Vec<Vec<i8>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("arrangement dimension must be at least 1"));
        }
        let mut out: Vec<Vec<i8>> = Vec::with_capacity(hyperplanes.len());
        for mut c in hyperplanes {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: c.len(),
                });
            }
            if c.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::invalid("hyperplane coefficients must be -1 or +1"));
            }
            if c[0] < 0 {
                c.iter_mut().for_each(|v| *v = -*v);
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        Ok(ArrangementSpec {
            dim,
            hyperplanes: out,
        })
    }

    /// All `2^(N−1)` distinct diagonal hyperplanes.
    pub fn all_diagonal(dim: usize) -> Result<Self> {
        if dim == 0 || dim > 20 {
            return Err(Error::invalid(format!("dimension {dim} out of range")));
        }
        let planes = (0..1usize << (dim - 1))
            .map(|m| {
                std::iter::once(1)
                    .chain((1..dim).map(|i| if (m >> (i - 1)) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect();
        ArrangementSpec::new(dim, planes)
    }

    /// One hyperplane per training sample, with coefficients
    /// `y_s·sign(h_i(x_s))`.
    pub fn from_responses(table: &ResponseTable) -> Result<Self> {
        let planes = (0..table.num_samples())
            .map(|s| {
                let y = table.labels()[s];
                table
                    .row(s)
                    .iter()
                    .map(|&h| if (h >= 0.0) == (y > 0.0) { 1 } else { -1 })
                    .collect()
            })
            .collect();
        ArrangementSpec::new(table.num_stumps(), planes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[Vec<i8>] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }
}

/// Largest margin `t` with `σ_k·(c_k·w) ≥ t` for every constraint, and the
/// point attaining it.
fn max_margin(dim: usize, constraints: &[(&[i8], i8)]) -> (f64, Vec<f64>) {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let w: Vec<_> = (0..dim).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let t = lp.add_var(1.0, (0.0, 1.0));
    for (c, sigma) in constraints {
        let s = f64::from(*sigma);
        let expr: Vec<_> = w
            .iter()
            .zip(c.iter())
            .map(|(&v, &ci)| (v, s * f64::from(ci)))
            .chain(std::iter::once((t, -1.0)))
            .collect();
        lp.add_constraint(expr.as_slice(), ComparisonOp::Ge, 0.0);
    }
    // t = 0, w = 0 is always feasible and the box bounds the objective
    let sol = lp.solve().expect("margin LP is feasible and bounded");
    let point = w.iter().map(|&v| sol[v]).collect();
    (sol[t], point)
}

fn dot(c: &[i8], w: &[f64]) -> f64 {
    c.iter().zip(w).map(|(&ci, wi)| f64::from(ci) * wi).sum()
}

/// Exact number of full-dimensional regions of the arrangement.
pub fn count_regions(spec: &ArrangementSpec) -> Result<u64> {
    if spec.dim > MAX_REGION_DIM || spec.len() > MAX_REGION_HYPERPLANES {
        return Err(Error::TooLarge(format!(
            "region counting supports N <= {MAX_REGION_DIM} and at most \
             {MAX_REGION_HYPERPLANES} hyperplanes, got N = {} with {}",
            spec.dim,
            spec.len()
        )));
    }
    if spec.is_empty() {
        return Ok(1);
    }
    let planes = &spec.hyperplanes;
    let mut signs: Vec<i8> = Vec::with_capacity(planes.len());
    let mut count = 0u64;
    // the empty prefix: whole space, witness 0 with unbounded margin
    extend(spec.dim, planes, &mut signs, &vec![0.0; spec.dim], 1.0, &mut count);
    Ok(count)
}

fn extend(
    dim: usize,
    planes: &[Vec<i8>],
    signs: &mut Vec<i8>,
    witness: &[f64],
    witness_margin: f64,
    count: &mut u64,
) {
    let k = signs.len();
    if k == planes.len() {
        *count += 1;
        return;
    }
    let v = dot(&planes[k], witness);
    for sigma in [1i8, -1] {
        let child_margin = witness_margin.min(f64::from(sigma) * v);
        let (margin, point) = if child_margin > FEASIBILITY_MARGIN {
            (child_margin, witness.to_vec())
        } else {
            signs.push(sigma);
            let constraints: Vec<(&[i8], i8)> = planes[..=k]
                .iter()
                .zip(signs.iter())
                .map(|(c, &s)| (c.as_slice(), s))
                .collect();
            let r = max_margin(dim, &constraints);
            signs.pop();
            r
        };
        if margin > FEASIBILITY_MARGIN {
            signs.push(sigma);
            extend(dim, planes, signs, &point, margin, count);
            signs.pop();
        }
    }
}

/// `Σ_{k=0}^{N} C(S, k)`, evaluated exactly.
pub fn region_upper_bound(num_weights: u64, num_hyperplanes: u64) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut term = BigUint::from(1u32); // C(S, 0)
    for k in 0..=num_weights.min(num_hyperplanes) {
        total += &term;
        // C(S, k+1) = C(S, k)·(S − k)/(k + 1)
        term = term * BigUint::from(num_hyperplanes - k) / BigUint::from(k + 1);
    }
    total
}
