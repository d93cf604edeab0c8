use rayon::prelude::*;

use super::transform::{Evaluator, Kind, Method};
use crate::body::{ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, unit_panel_rule};
use crate::scalar::Real;

/// Radii sampled per envelope window by [`average_envelope`].
pub const AVERAGE_SAMPLES_PER_WINDOW: usize = 8;

fn power<T: Real>(v: T, p: u32) -> T {
    if p == 1 {
        v.abs()
    } else {
        v * v
    }
}

/// Angular node count: at least `max(256, 32·R·diam)`, a multiple of four.
fn angular_nodes<T: Real>(radius: T, diam: T) -> usize {
    let n = (T::lit(32.0) * radius * diam).ceil().to_f64_lossy().max(256.0) as usize;
    n.div_ceil(4) * 4
}

/// Mean of `f(θ_k)`, `θ_k = 2πk/n`, for `f` with `f(θ + π) = f(θ)`, and
/// also `f(−θ) = f(θ)` when `mirror` is set.
fn circle_mean<T: Real>(n: usize, mirror: bool, f: impl Fn(T) -> T + Sync) -> T {
    let tau = T::lit(std::f64::consts::TAU);
    let theta = |k: usize| tau * T::lit(k as f64) / T::lit(n as f64);
    if mirror {
        let q = n / 4;
        let terms: Vec<T> = (0..=q)
            .into_par_iter()
            .map(|k| {
                let w = if k == 0 || k == q { 2.0 } else { 4.0 };
                T::lit(w) * f(theta(k))
            })
            .collect();
        pairwise_sum(&terms) / T::lit(n as f64)
    } else {
        let terms: Vec<T> = (0..n / 2).into_par_iter().map(|k| f(theta(k))).collect();
        (pairwise_sum(&terms) + pairwise_sum(&terms)) / T::lit(n as f64)
    }
}

/// `(∫ |F(Rω)|^p dω)^{1/p}` over the uniform probability measure on the
/// unit sphere, `F` the surface or body transform, `p ∈ {1, 2}`.
///
/// Planar bodies use a uniform angular grid; rotation-invariant bodies are
/// evaluated in one direction. Boxes in `d = 3` use a product rule
/// (Gauss–Legendre in the polar cosine, uniform in azimuth).
pub fn spherical_average<T: Real>(body: &ConvexBody<T>, radius: T, p: u32, kind: Kind) -> Result<T> {
    if p != 1 && p != 2 {
        return Err(Error::Argument(format!("average exponent must be 1 or 2, got {p}")));
    }
    if !(radius > T::zero() && radius.is_finite()) {
        return Err(Error::Range(format!("average radius must be positive, got {radius}")));
    }
    let d = body.dim();
    let ev = Evaluator::new(body, kind, radius, Method::Auto)?;
    let mirror = matches!(body.shape(), Shape::Ellipsoid(_) | Shape::Box(_) | Shape::LpBall { .. });
    let mean = match d {
        2 if body.is_rotation_invariant() => power(ev.eval(&[radius, T::zero()]), p),
        2 => {
            let n = angular_nodes(radius, body.diameter());
            circle_mean(n, mirror, |th: T| power(ev.eval(&[radius * th.cos(), radius * th.sin()]), p))
        }
        3 if matches!(body.shape(), Shape::Box(_)) => {
            let n = angular_nodes(radius, body.diameter());
            let (gx, gw) = unit_panel_rule();
            // the box is symmetric under z → −z: integrate z ∈ [0, 1]
            let panels = n.div_ceil(24);
            let h = T::one() / T::lit(panels as f64);
            let rings: Vec<T> = (0..panels * gx.len())
                .map(|j| {
                    let (k, i) = (j / gx.len(), j % gx.len());
                    let z = (T::lit(k as f64) + T::lit(gx[i])) * h;
                    let rho = (T::one() - z * z).max(T::zero()).sqrt();
                    let ring = circle_mean(n, true, |th: T| {
                        power(ev.eval(&[radius * rho * th.cos(), radius * rho * th.sin(), radius * z]), p)
                    });
                    T::lit(gw[i]) * h * ring
                })
                .collect();
            pairwise_sum(&rings)
        }
        _ => {
            return Err(Error::Capability(format!(
                "spherical averages in dimension {d} are available for boxes in d = 3 only"
            )))
        }
    };
    Ok(if p == 2 { mean.sqrt() } else { mean })
}

/// Envelope of spherical averages over geometric windows.
///
/// Window `j` starts at `R_j = r_min·2^{j/w}` (`j = 0..J`, with `R_J = r_max`)
/// and is sampled at [`AVERAGE_SAMPLES_PER_WINDOW`] radii spread over
/// `1/(2·inradius)`, the longest period of the flat-side oscillations of a
/// polygonal body. The largest average in each window is kept.
pub fn average_envelope<T: Real>(
    body: &ConvexBody<T>,
    kind: Kind,
    p: u32,
    r_min: T,
    r_max: T,
    windows_per_octave: usize,
) -> Result<Vec<(T, T)>> {
    if !(r_min > T::zero() && r_max > r_min && r_max.is_finite()) {
        return Err(Error::Argument(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    let w = windows_per_octave.max(1) as f64;
    let octaves = (r_max / r_min).to_f64_lossy().log2();
    let windows = (octaves * w).round() as usize;
    let span = (T::lit(2.0) * body.inradius()).recip();
    let m = AVERAGE_SAMPLES_PER_WINDOW;
    let mut out = Vec::with_capacity(windows + 1);
    for j in 0..=windows {
        let start = r_min * T::lit(2f64.powf(j as f64 / w));
        let mut best = (start, T::neg_infinity());
        for i in 0..m {
            let r = start + span * T::lit(i as f64 / m as f64);
            let v = spherical_average(body, r, p, kind)?;
            if v > best.1 {
                best = (r, v);
            }
        }
        out.push(best);
    }
    Ok(out)
}
