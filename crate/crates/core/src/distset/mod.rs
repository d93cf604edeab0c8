//! Finite point sets and their distinct `K`-distances.
//!
//! Integer lattices `ℤ^d ∩ [0, q]^d` and rotated lattices are counted
//! through their difference vectors: every pair difference of a lattice
//! window is a lattice vector `v`, and the number of pairs realising `v`
//! is `Π (q + 1 − |v_i|)`, also for rotated windows `R_θ(ℤ² ∩ [0, q]²)`.
//! Other sets fall back to an all-pairs sweep.

mod checks;
mod count;
mod growth;
mod points;

pub use checks::{separated_check, well_distributed_check, Separation, WellDistributed};
pub use count::{
    distance_set, distance_set_all_pairs, DistanceSet, ExactKeys, Mode, FLOAT_TOLERANCE, PAIR_CAP,
};
pub use growth::{
    growth_scan, min_gap_trend, polygonality_probe, report_from_counts, write_growth_csv, Classification,
    GrowthPoint, GrowthReport,
    CURVED_ABOVE, POLYGON_BELOW,
};
pub use points::{Family, PointSet, Provenance};
