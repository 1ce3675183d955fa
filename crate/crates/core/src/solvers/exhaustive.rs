use std::time::Instant;

use super::{Objective, SolveResult};
use crate::error::{Error, Result};

pub const MAX_EXHAUSTIVE_VARS: usize = 24;

/// Global minimum by enumerating all `2^V` bit vectors. Bit `k` of the
/// vector is bit `k` of the enumeration counter; ties go to the smallest
/// counter value.
pub fn solve_exhaustive<O: Objective + ?Sized>(objective: &O) -> Result<SolveResult> {
    let v = objective.num_vars();
    if v > MAX_EXHAUSTIVE_VARS {
        return Err(Error::TooLarge(format!(
            "exhaustive search is capped at {MAX_EXHAUSTIVE_VARS} variables, got {v}; \
             use the tabu or annealing solver instead"
        )));
    }
    let start = Instant::now();
    let mut bits = vec![0u8; v];
    let mut best_bits = bits.clone();
    let mut best_energy = objective.energy(&bits);
    let total: u64 = 1 << v;
    for m in 1..total {
        for (k, b) in bits.iter_mut().enumerate() {
            *b = ((m >> k) & 1) as u8;
        }
        let e = objective.energy(&bits);
        if e < best_energy {
            best_energy = e;
            best_bits.copy_from_slice(&bits);
        }
    }
    Ok(SolveResult {
        best_bits,
        best_energy,
        evaluations: total,
        wall_time: start.elapsed(),
        seed: 0,
        trace: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::QuboProblem;
    use crate::solvers::FnObjective;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_problem() {
        let p = QuboProblem::from_matrix(2, vec![-1.0, 0.0, 0.0, 1.0]).unwrap();
        let r = solve_exhaustive(&p).unwrap();
        assert_eq!(r.best_bits, vec![1, 0]);
        assert_eq!(r.best_energy, -1.0);
    }

    #[test]
    fn zero_problem_ties_to_all_zero() {
        let p = QuboProblem::from_matrix(5, vec![0.0; 25]).unwrap();
        let r = solve_exhaustive(&p).unwrap();
        assert_eq!(r.best_bits, vec![0; 5]);
        assert_eq!(r.best_energy, 0.0);
    }

    #[test]
    fn rejects_too_many_vars() {
        let f = FnObjective::new(25, |_: &[u8]| 0.0);
        assert!(matches!(solve_exhaustive(&f), Err(Error::TooLarge(_))));
    }

    #[test]
    fn matches_independent_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..5 {
            let v = 10;
            let mut q = vec![0.0; v * v];
            for i in 0..v {
                for j in i..v {
                    let x: f64 = rng.random_range(-1.0..1.0);
                    q[i * v + j] = x;
                    q[j * v + i] = x;
                }
            }
            let p = QuboProblem::from_matrix(v, q.clone()).unwrap();
            let r = solve_exhaustive(&p).unwrap();
            // second enumerator: recursive, explicit double sum
            fn rec(q: &[f64], v: usize, bits: &mut Vec<u8>, best: &mut (f64, Vec<u8>)) {
                if bits.len() == v {
                    let mut e = 0.0;
                    for i in 0..v {
                        for j in 0..v {
                            e += q[i * v + j] * f64::from(bits[i]) * f64::from(bits[j]);
                        }
                    }
                    if e < best.0 - 1e-12 {
                        *best = (e, bits.clone());
                    }
                    return;
                }
                for b in [0, 1] {
                    bits.push(b);
                    rec(q, v, bits, best);
                    bits.pop();
                }
            }
            let mut best = (f64::INFINITY, vec![]);
            rec(&q, v, &mut Vec::new(), &mut best);
            assert!((best.0 - r.best_energy).abs() < 1e-9);
            assert_eq!(r.best_energy, p.energy(&r.best_bits));
        }
    }
}
