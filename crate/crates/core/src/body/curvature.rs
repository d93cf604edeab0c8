//! Square-root chord condition `l(θ, ε) ≤ c·√ε`.

use rayon::prelude::*;

use super::{ChordQuery, ConvexBody};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Angular resolution used when callers have no preference.
pub const DEFAULT_DIRECTIONS: usize = 360;

/// Consecutive growth steps that mark a direction as flat.
const FLAT_RUN: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<T> {
    /// `max l(θ, ε)/√ε` over the grid.
    pub c_sup: T,
    /// Direction attaining `c_sup`.
    pub worst_theta: T,
    pub satisfied: bool,
    /// Directions whose ratio kept growing like a flat side.
    pub flat_directions: Vec<T>,
}

/// Evaluates `l(θ, ε)/√ε` over `directions` uniform angles (plus the face
/// normals of a polygon) and the given depths.
///
/// A direction is flagged as flat when, walking the depths from large to
/// small, the ratio grows by at least `(ε_i/ε_{i+1})^{1/4}` at each of
/// [`FLAT_RUN`] consecutive steps; a flat side keeps the chord constant, so
/// its ratio grows like `(ε_i/ε_{i+1})^{1/2}`. The condition is satisfied
/// when no direction is flagged.
pub fn curvature_condition<T: Real>(
    body: &ConvexBody<T>,
    eps_grid: &[T],
    directions: usize,
) -> Result<CurvatureReport<T>> {
    if eps_grid.is_empty() {
        return Err(Error::Argument("empty depth grid".into()));
    }
    if body.dim() != 2 {
        return Err(Error::Capability("curvature condition is planar".into()));
    }
    let directions = directions.max(1);
    let wmin = body.min_width(directions);
    let mut eps: Vec<T> = eps_grid.to_vec();
    eps.sort_by(|a, b| b.partial_cmp(a).expect("finite depths"));
    eps.dedup();
    if let Some(bad) = eps.iter().find(|e| !(**e > T::zero() && **e < wmin)) {
        return Err(Error::Range(format!(
            "depth {bad} outside (0, minimal width {wmin})"
        )));
    }
    let tau = T::lit(std::f64::consts::TAU);
    let mut thetas: Vec<T> = (0..directions)
        .map(|k| tau * T::lit(k as f64) / T::lit(directions as f64))
        .collect();
    if let Some(poly) = body.outline() {
        thetas.extend(poly.faces().map(|(n, _)| {
            let a = n[1].atan2(n[0]);
            if a < T::zero() { a + tau } else { a }
        }));
        thetas.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
        thetas.dedup_by(|a, b| (*a - *b).abs() < T::lit(1e-12));
    }
    let per_dir: Vec<(T, T, bool)> = thetas
        .into_par_iter()
        .map(|theta| {
            let ratios: Vec<T> = eps
                .iter()
                .map(|&e| {
                    body.chord_length(&ChordQuery::new(theta, e))
                        .map(|l| l / e.sqrt())
                        .unwrap_or(T::zero())
                })
                .collect();
            let mut run = 0;
            let mut flat = false;
            for i in 0..ratios.len().saturating_sub(1) {
                let need = (eps[i] / eps[i + 1]).powf(T::lit(0.25));
                if ratios[i] > T::zero() && ratios[i + 1] >= ratios[i] * need {
                    run += 1;
                    if run >= FLAT_RUN {
                        flat = true;
                    }
                } else {
                    run = 0;
                }
            }
            let max = ratios.iter().copied().fold(T::zero(), T::max);
            (theta, max, flat)
        })
        .collect();
    let (worst_theta, c_sup) = per_dir
        .iter()
        .fold((T::zero(), T::zero()), |best, &(th, m, _)| if m > best.1 { (th, m) } else { best });
    let flat_directions: Vec<T> = per_dir.iter().filter(|d| d.2).map(|d| d.0).collect();
    Ok(CurvatureReport {
        c_sup,
        worst_theta,
        satisfied: flat_directions.is_empty(),
        flat_directions,
    })
}
