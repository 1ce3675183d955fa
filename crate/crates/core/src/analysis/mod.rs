//! Combinatorial analysis of the weight space: region counts of diagonal
//! hyperplane arrangements and the bit-precision bound derived from them.

mod bits;
mod regions;

pub use bits::{bit_precision_bound, required_bits};
pub use regions::{
    count_regions, region_upper_bound, ArrangementSpec, FEASIBILITY_MARGIN, MAX_REGION_DIM,
    MAX_REGION_HYPERPLANES,
};
