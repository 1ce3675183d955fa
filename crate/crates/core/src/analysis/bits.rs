//! Bit precision needed for the weights.
//!
//! Requiring at least as many lattice points `(2^bits)^N` as regions in the
//! positive orthant (about `N_regions / 2^N`), bounding `N_regions` by
//! `Σ_k C(S, k) ≤ (eS/N)^N`, gives `bits ≥ log₂(f) + log₂(e) − 1` with
//! `f = S/N`.

/// The real-valued lower bound `log₂(f) + log₂(e) − 1`.
pub fn bit_precision_bound(ratio: f64) -> f64 {
    ratio.log2() + std::f64::consts::LOG2_E - 1.0
}

/// Integer bit depth for `num_samples` training samples and `num_weights`
/// weak classifiers: the bound rounded up, with a floor of one bit. With
/// fewer samples than classifiers the answer is always 1.
pub fn required_bits(num_samples: u64, num_weights: u64) -> u32 {
    assert!(num_samples >= 1 && num_weights >= 1, "sample and weight counts must be positive");
    if num_samples < num_weights {
        return 1;
    }
    let f = num_samples as f64 / num_weights as f64;
    bit_precision_bound(f).max(1.0).ceil() as u32
}
