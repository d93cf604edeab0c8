//! Distance sets of convex norms, numerically.
//!
//! The crate is organised around four subsystems:
//!
//! - [`body`]: origin-symmetric convex bodies, their gauge norms, support
//!   functions, chords and the square-root chord (curvature) condition.
//! - [`fourier`]: Fourier transforms of surface measure and of the body
//!   indicator, spherical averages, annulus transforms and power-law fits.
//! - [`distset`]: discrete point sets, distinct `K`-distance counting with
//!   exact and tolerance paths, growth exponents and separation trends.
//! - [`fractal`]: digit-restricted Cantor sets, difference covers, box
//!   counting, diophantine cube sets and discrete energy integrals.
//!
//! Geometry and transforms are generic over the scalar type through
//! [`Real`] (`f32`/`f64`); exact computations use [`Rational`]. The aliases
//! below fix the common `f64` instantiations.

pub mod body;
pub mod distset;
pub mod error;
pub mod fourier;
pub mod fractal;
pub mod scalar;
pub mod quadrature;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Field, Rational, Real};

/// `f64` convex body.
pub type Body = body::ConvexBody<f64>;
/// `f32` convex body.
pub type Body32 = body::ConvexBody<f32>;
/// `f64` direction.
pub type Dir = body::Direction<f64>;
/// `f64` frequency.
pub type Freq = fourier::Frequency<f64>;
/// Exact planar polygon with rational vertices.
pub type ExactPolygon = body::Polygon<Rational>;
/// `f64` point set.
pub type Points = distset::PointSet<f64>;
/// Exact interval union.
pub type RationalIntervals = fractal::IntervalUnion<Rational>;
