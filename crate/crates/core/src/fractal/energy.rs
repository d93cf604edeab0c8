use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::CantorSpec;
use crate::body::rational_to_f64;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, PANEL_ORDER};
use crate::scalar::Rational;

/// Largest number of atoms a measure may expand to.
pub const ATOM_CAP: u64 = 1_000_000;

/// One convolution factor: a small atomic measure.
#[derive(Debug, Clone, PartialEq)]
struct Layer {
    points: Vec<f64>,
    weights: Vec<f64>,
}

/// Finitely supported probability measure `μ = Σ w_k δ_{x_k}`.
///
/// The atoms may be stored as a convolution of small layers; the transform
/// `μ̂(ξ) = Σ w_k e^{−2πi x_k·ξ}` is then evaluated as the product of the
/// layer transforms, which is the same finite sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<Rational>,
    layers: Vec<Layer>,
}

impl AtomicMeasure {
    /// Atoms with positive rational weights summing to exactly 1.
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<Rational>) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        if dim == 0 || points.len() != weights.len() || points.iter().any(|p| p.len() != dim) {
            return Err(Error::Argument("need equally many atoms and weights of one positive dimension".into()));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Argument("atoms must be finite".into()));
        }
        let zero = Rational::from_integer(0);
        if weights.iter().any(|w| *w <= zero) {
            return Err(Error::Argument("weights must be positive".into()));
        }
        let total = weights.iter().fold(zero, |s, w| s + *w);
        if total != Rational::from_integer(1) {
            return Err(Error::Argument(format!("weights sum to {total}, not 1")));
        }
        let flat: Vec<f64> = points.into_iter().flatten().collect();
        let layer = Layer {
            points: flat.clone(),
            weights: weights.iter().map(|w| rational_to_f64(*w)).collect(),
        };
        Ok(Self {
            dim,
            points: flat,
            weights,
            layers: vec![layer],
        })
    }

    /// `δ_x`.
    pub fn point_mass(x: Vec<f64>) -> Result<Self> {
        Self::new(vec![x], vec![Rational::from_integer(1)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.dim..(k + 1) * self.dim]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Exact total mass.
    pub fn total_mass(&self) -> Rational {
        self.weights.iter().fold(Rational::from_integer(0), |s, w| s + *w)
    }

    /// Largest coordinate extent of the support (per axis).
    fn extent(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let (lo, hi) = (0..self.len()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
                    let v = self.points[k * self.dim + i];
                    (lo.min(v), hi.max(v))
                });
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Euclidean diameter bound of the support.
    fn diameter(&self) -> f64 {
        self.extent() * (self.dim as f64).sqrt()
    }

    /// `μ̂(ξ)`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        let d = self.dim;
        self.layers.iter().fold(Complex64::new(1.0, 0.0), |acc, layer| {
            let s: Complex64 = layer
                .weights
                .iter()
                .enumerate()
                .map(|(k, w)| {
                    let phase: f64 = layer.points[k * d..(k + 1) * d].iter().zip(xi).map(|(x, e)| x * e).sum();
                    Complex64::from_polar(*w, -TAU * phase)
                })
                .sum();
            acc * s
        })
    }

    /// `μ̂(ξ)` by direct summation over the atoms.
    pub fn fourier_direct(&self, xi: &[f64]) -> Complex64 {
        (0..self.len())
            .map(|k| {
                let phase: f64 = self.point(k).iter().zip(xi).map(|(x, e)| x * e).sum();
                Complex64::from_polar(rational_to_f64(self.weights[k]), -TAU * phase)
            })
            .sum()
    }
}

/// Uniform weights on the centres of the depth-`n` cells of `C^dim`,
/// with `C` the digit-restricted Cantor set of `spec`.
pub fn natural_product_measure(spec: &CantorSpec, dim: usize) -> Result<AtomicMeasure> {
    spec.validate()?;
    if dim == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    let cells = spec.cells();
    let atoms = (cells as u128).pow(dim as u32);
    if atoms > ATOM_CAP as u128 {
        return Err(Error::Limit(format!("{atoms} atoms exceed {ATOM_CAP}")));
    }
    let den = spec.denominator();
    let centers: Vec<f64> = spec
        .left_numerators()
        .iter()
        .map(|l| rational_to_f64(Rational::new(2 * l + 1, 2 * den)))
        .collect();
    let mut points = Vec::with_capacity(atoms as usize * dim);
    let mut idx = vec![0usize; dim];
    'outer: loop {
        points.extend(idx.iter().map(|i| centers[*i]));
        for i in (0..dim).rev() {
            idx[i] += 1;
            if idx[i] < centers.len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    let weight = Rational::new(1, atoms as i128);
    // centre shift, then one layer per axis and digit position
    let half = rational_to_f64(Rational::new(1, 2 * den));
    let mut layers = vec![Layer {
        points: vec![half; dim],
        weights: vec![1.0],
    }];
    let m = spec.m as usize;
    for axis in 0..dim {
        for k in 1..=spec.depth {
            let scale = rational_to_f64(Rational::new(1, spec.base().pow(k)));
            let mut pts = vec![0.0; m * dim];
            for (j, digit) in spec.digits().enumerate() {
                pts[j * dim + axis] = digit as f64 * scale;
            }
            layers.push(Layer {
                points: pts,
                weights: vec![1.0 / m as f64; m],
            });
        }
    }
    Ok(AtomicMeasure {
        dim,
        points,
        weights: vec![weight; atoms as usize],
        layers,
    })
}

/// [`natural_product_measure`] on the line.
pub fn natural_measure(spec: &CantorSpec) -> Result<AtomicMeasure> {
    natural_product_measure(spec, 1)
}

/// `∫_{a ≤ |ξ| ≤ b} |ξ|^{−γ}|μ̂(ξ)|² dξ` on a polar grid: Gauss–Legendre
/// panels in the radius, the periodic trapezoid rule on the half circle
/// (`|μ̂(−ξ)| = |μ̂(ξ)|`) in the angle.
fn shell(mu: &AtomicMeasure, gamma: f64, a: f64, b: f64) -> f64 {
    let diam = mu.diameter().max(1.0);
    let panel = 1.0 / (2.0 * diam);
    let panels = ((b - a) / panel).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let (x, w) = gauss_legendre(PANEL_ORDER);
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let lo = a + h * p as f64;
            x.iter()
                .zip(&w)
                .map(move |(x, w)| (lo + 0.5 * h * (x + 1.0), 0.5 * h * w))
                .collect::<Vec<_>>()
        })
        .collect();
    let parts: Vec<f64> = nodes
        .par_iter()
        .map(|&(r, wr)| {
            let angular = match mu.dim {
                1 => 2.0 * mu.fourier(&[r]).norm_sqr(),
                _ => {
                    let band = PI * r * diam;
                    let n = (band + 10.0 * band.cbrt()).ceil() as usize + 8;
                    let sum: f64 = (0..n)
                        .map(|k| {
                            let (s, c) = (PI * (k as f64 + 0.5) / n as f64).sin_cos();
                            mu.fourier(&[r * c, r * s]).norm_sqr()
                        })
                        .sum();
                    TAU * r * sum / n as f64
                }
            };
            wr * r.powf(-gamma) * angular
        })
        .collect();
    crate::quadrature::pairwise_sum(&parts)
}

fn check_energy_args(mu: &AtomicMeasure, gamma: f64) -> Result<()> {
    let d = mu.dim();
    if d > 2 {
        return Err(Error::Capability(format!("energy integrals are implemented for d ≤ 2, got {d}")));
    }
    if !(gamma > 0.0 && gamma < d as f64) {
        return Err(Error::Range(format!("γ must lie in (0, {d}), got {gamma}")));
    }
    Ok(())
}

/// `∫_{1 ≤ |ξ| ≤ T} |ξ|^{−γ}|μ̂(ξ)|² dξ` for `d ∈ {1, 2}` and `0 < γ < d`.
pub fn energy_integral(mu: &AtomicMeasure, gamma: f64, t: f64) -> Result<f64> {
    check_energy_args(mu, gamma)?;
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::Range(format!("T must exceed 1, got {t}")));
    }
    Ok(shell(mu, gamma, 1.0, t))
}

/// Partial energy integrals over an increasing ladder of cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyLadder {
    pub gamma: f64,
    pub cutoffs: Vec<f64>,
    /// `I(T_k)`.
    pub integrals: Vec<f64>,
    /// `I(T_k) − I(T_{k−1})`, `k ≥ 1`.
    pub increments: Vec<f64>,
    /// Consecutive increment quotients.
    pub increment_ratios: Vec<f64>,
}

impl EnergyLadder {
    /// Every increment exceeds the one before.
    pub fn increments_grow(&self) -> bool {
        !self.increment_ratios.is_empty() && self.increment_ratios.iter().all(|r| *r > 1.0)
    }

    /// Every increment is smaller than the one before.
    pub fn increments_decay(&self) -> bool {
        !self.increment_ratios.is_empty() && self.increment_ratios.iter().all(|r| *r < 1.0)
    }
}

/// Evaluates `I(T)` on a ladder, integrating each shell once.
pub fn energy_ladder(mu: &AtomicMeasure, gamma: f64, cutoffs: &[f64]) -> Result<EnergyLadder> {
    check_energy_args(mu, gamma)?;
    if cutoffs.is_empty() || cutoffs[0] <= 1.0 || cutoffs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Argument("cutoffs must be increasing and above 1".into()));
    }
    let mut integrals = Vec::with_capacity(cutoffs.len());
    let mut lo = 1.0;
    let mut acc = 0.0;
    for &t in cutoffs {
        acc += shell(mu, gamma, lo, t);
        integrals.push(acc);
        lo = t;
    }
    let increments: Vec<f64> = integrals.windows(2).map(|w| w[1] - w[0]).collect();
    let increment_ratios = increments.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(EnergyLadder {
        gamma,
        cutoffs: cutoffs.to_vec(),
        integrals,
        increments,
        increment_ratios,
    })
}
