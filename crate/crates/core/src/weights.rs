//! Fixed-point weight vectors.
//!
//! A `d`-bit weight stores an integer level `k = Σ_b 2^b·bit_b` and represents
//! the value `k / (2^d − 1)`, so both 0 and 1 are attainable. Raw bits are laid
//! out weight-major (`bit_{i,b}` at index `i·d + b`, `b = 0` least significant),
//! followed by one auxiliary indicator bit per weight when `d > 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_BIT_DEPTH: u32 = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub bit_depth: u32,
    pub raw_bits: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    values: Vec<f64>,
    /// `None` for real-valued weights (e.g. converted boosting models).
    encoding: Option<FixedPoint>,
}

/// Largest level representable with `bit_depth` bits.
pub fn max_level(bit_depth: u32) -> u32 {
    (1u32 << bit_depth) - 1
}

fn check_depth(bit_depth: u32) -> Result<()> {
    if bit_depth == 0 || bit_depth > MAX_BIT_DEPTH {
        return Err(Error::invalid(format!(
            "bit depth must be in 1..={MAX_BIT_DEPTH}, got {bit_depth}"
        )));
    }
    Ok(())
}

/// Number of solver variables for `num_weights` weights at `bit_depth`.
pub fn num_encoded_bits(num_weights: usize, bit_depth: u32, with_aux: bool) -> usize {
    let aux = if with_aux && bit_depth > 1 {
        num_weights
    } else {
        0
    };
    num_weights * bit_depth as usize + aux
}

impl WeightAssignment {
    pub fn zeros(num_weights: usize, bit_depth: u32) -> Result<Self> {
        Self::from_levels(&vec![0; num_weights], bit_depth)
    }

    /// Builds an assignment from integer levels in `0..=2^d − 1`.
    pub fn from_levels(levels: &[u32], bit_depth: u32) -> Result<Self> {
        check_depth(bit_depth)?;
        let top = max_level(bit_depth);
        let d = bit_depth as usize;
        let n = levels.len();
        let mut raw_bits = vec![0u8; num_encoded_bits(n, bit_depth, true)];
        let mut values = Vec::with_capacity(n);
        for (i, &level) in levels.iter().enumerate() {
            if level > top {
                return Err(Error::invalid(format!(
                    "level {level} exceeds {top} for {bit_depth}-bit weights"
                )));
            }
            for b in 0..d {
                raw_bits[i * d + b] = ((level >> b) & 1) as u8;
            }
            if bit_depth > 1 {
                raw_bits[n * d + i] = u8::from(level > 0);
            }
            values.push(f64::from(level) / f64::from(top));
        }
        Ok(WeightAssignment {
            values,
            encoding: Some(FixedPoint {
                bit_depth,
                raw_bits,
            }),
        })
    }

    /// Decodes a solver bit vector. `bits` holds either the `N·d` weight bits
    /// alone or, for `d > 1`, also the `N` auxiliary bits that follow them.
    /// Missing auxiliary bits are derived from the levels.
    pub fn from_bits(bits: &[u8], num_weights: usize, bit_depth: u32) -> Result<Self> {
        check_depth(bit_depth)?;
        let d = bit_depth as usize;
        let plain = num_weights * d;
        let full = num_encoded_bits(num_weights, bit_depth, true);
        if bits.len() != plain && bits.len() != full {
            return Err(Error::invalid(format!(
                "expected {plain} or {full} bits for {num_weights} weights at depth {bit_depth}, got {}",
                bits.len()
            )));
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::invalid(format!("bit values must be 0 or 1, got {b}")));
        }
        let levels: Vec<u32> = (0..num_weights)
            .map(|i| {
                (0..d)
                    .map(|b| u32::from(bits[i * d + b]) << b)
                    .sum::<u32>()
            })
            .collect();
        let mut w = Self::from_levels(&levels, bit_depth)?;
        if bits.len() == full {
            if let Some(enc) = w.encoding.as_mut() {
                enc.raw_bits.copy_from_slice(bits);
            }
        }
        Ok(w)
    }

    /// Real-valued weights in `[0, 1]` without a bit encoding.
    pub fn continuous(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values
            .iter()
            .find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0)
        {
            return Err(Error::invalid(format!("weight {v} outside [0, 1]")));
        }
        Ok(WeightAssignment {
            values,
            encoding: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bit_depth(&self) -> Option<u32> {
        self.encoding.as_ref().map(|e| e.bit_depth)
    }

    pub fn raw_bits(&self) -> Option<&[u8]> {
        self.encoding.as_ref().map(|e| e.raw_bits.as_slice())
    }

    /// The integer level of each weight, when the weights are fixed-point.
    pub fn levels(&self) -> Option<Vec<u32>> {
        let enc = self.encoding.as_ref()?;
        let d = enc.bit_depth as usize;
        Some(
            (0..self.values.len())
                .map(|i| {
                    (0..d)
                        .map(|b| u32::from(enc.raw_bits[i * d + b]) << b)
                        .sum()
                })
                .collect(),
        )
    }

    /// The auxiliary indicator bits (`d > 1` only).
    pub fn aux_bits(&self) -> Option<&[u8]> {
        let enc = self.encoding.as_ref()?;
        if enc.bit_depth == 1 {
            return None;
        }
        let start = self.values.len() * enc.bit_depth as usize;
        Some(&enc.raw_bits[start..])
    }

    /// ‖w‖₀: number of strictly positive weights.
    pub fn active_count(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_bit_values_are_binary() {
        let w = WeightAssignment::from_bits(&[1, 0, 1], 3, 1).unwrap();
        assert_eq!(w.values(), &[1.0, 0.0, 1.0]);
        assert_eq!(w.active_count(), 2);
        assert!(w.aux_bits().is_none());
    }

    #[test]
    fn two_bit_levels() {
        // weight 0: bits (1,0) -> level 1 -> 1/3; weight 1: bits (1,1) -> 3 -> 1
        let w = WeightAssignment::from_bits(&[1, 0, 1, 1], 2, 2).unwrap();
        assert_eq!(w.levels().unwrap(), vec![1, 3]);
        assert!((w.values()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(w.values()[1], 1.0);
        assert_eq!(w.aux_bits().unwrap(), &[1, 1]);
    }

    #[test]
    fn explicit_aux_bits_are_kept() {
        let w = WeightAssignment::from_bits(&[1, 0, 0, 0, 0, 1], 2, 2).unwrap();
        assert_eq!(w.aux_bits().unwrap(), &[0, 1]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(WeightAssignment::from_bits(&[1, 0, 1], 2, 1).is_err());
        assert!(WeightAssignment::from_bits(&[2], 1, 1).is_err());
        assert!(WeightAssignment::from_levels(&[4], 2).is_err());
        assert!(WeightAssignment::zeros(3, 0).is_err());
        assert!(WeightAssignment::continuous(vec![1.5]).is_err());
    }

    proptest! {
        #[test]
        fn levels_round_trip(d in 1u32..=8, raw in proptest::collection::vec(0u32..256, 1..12)) {
            let top = max_level(d);
            let levels: Vec<u32> = raw.iter().map(|l| l % (top + 1)).collect();
            let w = WeightAssignment::from_levels(&levels, d).unwrap();
            for (v, &l) in w.values().iter().zip(&levels) {
                prop_assert!((0.0..=1.0).contains(v));
                prop_assert_eq!(*v, f64::from(l) / f64::from(top));
            }
            let again = WeightAssignment::from_bits(w.raw_bits().unwrap(), levels.len(), d).unwrap();
            prop_assert_eq!(again, w);
        }
    }
}
