//! Digit-restricted Cantor sets, diophantine cube sets, box counting and
//! discrete energy integrals.
//!
//! `C_{2m}` is the set of `x ∈ [0, 1]` whose base-`2m` digits are all even.
//! Its depth-`n` iterate is a union of `m^n` intervals of length
//! `(2m)^{−n}`, represented exactly with rational endpoints. Under `l^∞`
//! the distance set of `C_{2m} × C_{2m}` is the absolute difference set of
//! `C_{2m}`, which [`difference_cover`] covers digit by digit.

mod boxdim;
mod cantor;
mod dio;
mod energy;
mod interval;
mod io;

pub use boxdim::{box_dim, levels_for_depth, BoxCountable, BoxDimension, Product};
pub use cantor::{cantor_build, difference_cover, CantorSpec, DifferenceCover, ENUMERATION_CAP};
pub use dio::{delta_cover, dio_build, DeltaCover, DioSet, DioSpec};
pub use energy::{
    energy_integral, energy_ladder, natural_measure, natural_product_measure, AtomicMeasure, EnergyLadder,
    ATOM_CAP,
};
pub use interval::IntervalUnion;
pub use io::{write_intervals_csv, IntervalSummary};
