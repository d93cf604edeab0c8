//! Fourier transforms of surface measures and indicator functions of convex
//! bodies, spherical averages, annulus transforms and decay fitting.
//!
//! Conventions: `f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx`. For a planar body the
//! indicator transform is reduced to the boundary by the divergence theorem,
//!
//! ```text
//! χ̂_K(ξ) = ∫_{∂K} (i ξ·n(x)) / (2π|ξ|²) e^{−2πi x·ξ} ds(x),
//! ```
//!
//! and origin symmetry folds every boundary integral onto half the boundary,
//! so both transforms are real.

mod average;
mod fit;
mod io;
mod lemmas;
mod transform;

pub use average::{average_envelope, spherical_average, AVERAGE_SAMPLES_PER_WINDOW};
pub use fit::{decay_fit, envelope_maxima, DecayProfile, MIN_SAMPLES, MIN_SPREAD};
pub use io::{write_scan_csv, FitSummary, ScanRow};
pub use lemmas::{
    lemma11_check, lemma12_check, Lemma11Report, Lemma12Grid, Lemma12Report, OctaveMax,
    GROWTH_LIMIT,
};
pub use transform::{
    annulus_ft, body_ft, pointwise_envelope, ray_envelope, ray_samples, surface_ft, transform, BoundaryRule,
    Evaluator, Kind, Method,
};

use crate::body::Direction;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A frequency `ξ = R·ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frequency<T> {
    xi: Vec<T>,
    radius: T,
}

impl<T: Real> Frequency<T> {
    pub fn new(xi: Vec<T>) -> Result<Self> {
        if xi.is_empty() || xi.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("frequency must be a finite, nonempty vector".into()));
        }
        let radius = xi.iter().map(|v| *v * *v).sum::<T>().sqrt();
        Ok(Self { xi, radius })
    }

    /// `R·ω`.
    pub fn from_polar(radius: T, dir: &Direction<T>) -> Self {
        Self {
            xi: dir.coords().iter().map(|c| *c * radius).collect(),
            radius: radius.abs(),
        }
    }

    /// `R·(cos θ, sin θ)`.
    pub fn planar(radius: T, theta: T) -> Self {
        Self::from_polar(radius, &Direction::from_angle(theta))
    }

    pub fn coords(&self) -> &[T] {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    /// `R = |ξ|`.
    pub fn radius(&self) -> T {
        self.radius
    }

    /// `ω = ξ/|ξ|`, or `None` at the origin.
    pub fn direction(&self) -> Option<Direction<T>> {
        Direction::normalize(&self.xi).ok()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            xi: self.xi.iter().map(|v| *v * s).collect(),
            radius: self.radius * s.abs(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-T::one())
    }
}

/// The gauge shell `A_{R,δ} = {x : R ≤ ||x||_K ≤ R + δ}` with `δ ≤ R/10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSpec<T> {
    radius: T,
    width: T,
}

impl<T: Real> AnnulusSpec<T> {
    pub fn new(radius: T, width: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(Error::Range(format!("annulus radius must be positive, got {radius}")));
        }
        if !(width > T::zero()) || width > radius / T::lit(10.0) {
            return Err(Error::Range(format!(
                "annulus width must lie in (0, R/10] = (0, {}], got {width}",
                radius / T::lit(10.0)
            )));
        }
        Ok(Self { radius, width })
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn width(&self) -> T {
        self.width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frequency_polar_roundtrip() {
        let f = Frequency::<f64>::planar(3.0, 0.7);
        assert!((f.radius() - 3.0).abs() < 1e-15);
        let w = f.direction().unwrap();
        assert!((w.angle() - 0.7).abs() < 1e-12);
        let g = Frequency::new(f.coords().to_vec()).unwrap();
        assert!((g.radius() - 3.0).abs() < 1e-12);
        assert!(Frequency::<f64>::new(vec![0.0, 0.0]).unwrap().direction().is_none());
    }

    #[test]
    fn annulus_width_is_bounded() {
        assert!(AnnulusSpec::new(1.0, 0.1).is_ok());
        assert!(matches!(AnnulusSpec::new(1.0, 0.2), Err(Error::Range(_))));
        assert!(matches!(AnnulusSpec::new(1.0, 0.0), Err(Error::Range(_))));
        assert!(matches!(AnnulusSpec::new(-1.0, 0.01), Err(Error::Range(_))));
    }
}
