use rayon::prelude::*;

use super::transform::{Evaluator, Kind, Method};
use super::AnnulusSpec;
use crate::body::{curvature_condition, ChordQuery, ConvexBody, Direction, DEFAULT_DIRECTIONS};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::{fit_power_law, median};

/// Largest ratio found in one octave of the parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OctaveMax {
    pub lo: f64,
    pub hi: f64,
    pub max: f64,
}

/// Chord bound for the indicator transform along rays.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma11Report {
    /// Largest `t|χ̂(tω)| / (l(θ, 1/2t) + l(θ+π, 1/2t))` on the grid.
    pub max_ratio: f64,
    /// `(t, θ)` attaining `max_ratio`.
    pub argmax: (f64, f64),
    pub octaves: Vec<OctaveMax>,
    /// Largest octave maximum over the median octave maximum.
    pub spread: f64,
    /// Grid points whose chord depth fell outside the body.
    pub skipped: usize,
}

fn octave_index(x: f64, lo: f64, count: usize) -> usize {
    (((x / lo).log2() + 1e-12).floor().max(0.0) as usize).min(count - 1)
}

fn octave_count(lo: f64, hi: f64) -> usize {
    ((hi / lo).log2() - 1e-12).ceil().max(1.0) as usize
}

fn octave_maxima(lo: f64, count: usize, values: impl Iterator<Item = (f64, f64)>) -> Vec<OctaveMax> {
    let mut out: Vec<OctaveMax> = (0..count)
        .map(|k| OctaveMax {
            lo: lo * 2f64.powi(k as i32),
            hi: lo * 2f64.powi(k as i32 + 1),
            max: f64::NEG_INFINITY,
        })
        .collect();
    for (x, v) in values {
        let slot = &mut out[octave_index(x, lo, count)];
        slot.max = slot.max.max(v);
    }
    out.retain(|o| o.max.is_finite());
    out
}

fn check_grid<T: Real>(what: &str, grid: &[T], lo: f64, hi: f64) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::Argument(format!("empty {what} grid")));
    }
    let v: Vec<f64> = grid.iter().map(|x| x.to_f64_lossy()).collect();
    if let Some(bad) = v.iter().find(|x| !(**x >= lo && **x <= hi)) {
        return Err(Error::Range(format!("{what} = {bad} outside [{lo}, {hi}]")));
    }
    Ok(v)
}

/// Evaluates `t|χ̂_K(tω)| / (l(θ, 1/(2t)) + l(θ+π, 1/(2t)))` over
/// `t ∈ t_grid ⊂ [4, 1024]` and `θ ∈ theta_grid`.
pub fn lemma11_check<T: Real>(body: &ConvexBody<T>, t_grid: &[T], theta_grid: &[T]) -> Result<Lemma11Report> {
    if body.dim() != 2 {
        return Err(Error::Capability("chord bounds are planar".into()));
    }
    let ts = check_grid("t", t_grid, 4.0, 1024.0)?;
    if theta_grid.is_empty() {
        return Err(Error::Argument("empty angle grid".into()));
    }
    let mut rows: Vec<(f64, f64, Option<f64>)> = Vec::with_capacity(ts.len() * theta_grid.len());
    for &t in t_grid {
        let ev = Evaluator::new(body, Kind::Body, t, Method::Auto)?;
        let eps = (t + t).recip();
        let chunk: Vec<(f64, f64, Option<f64>)> = theta_grid
            .par_iter()
            .map(|&th| {
                let dir = Direction::from_angle(th);
                let w = dir.planar();
                let chords = body
                    .chord_length(&ChordQuery { direction: dir.clone(), depth: eps })
                    .and_then(|a| {
                        body.chord_length(&ChordQuery { direction: dir.opposite(), depth: eps })
                            .map(|b| a + b)
                    });
                let ratio = chords.ok().map(|l| {
                    let v = ev.eval(&[w[0] * t, w[1] * t]).abs();
                    (t * v / l).to_f64_lossy()
                });
                (t.to_f64_lossy(), th.to_f64_lossy(), ratio)
            })
            .collect();
        rows.extend(chunk);
    }
    let skipped = rows.iter().filter(|r| r.2.is_none()).count();
    let valid: Vec<(f64, f64, f64)> = rows.iter().filter_map(|(t, th, r)| r.map(|r| (*t, *th, r))).collect();
    let Some(best) = valid.iter().copied().max_by(|a, b| a.2.total_cmp(&b.2)) else {
        return Err(Error::InsufficientData("every chord query was out of range".into()));
    };
    let (lo, hi) = (ts.iter().copied().fold(f64::INFINITY, f64::min), ts.iter().copied().fold(0.0, f64::max));
    let octaves = octave_maxima(lo, octave_count(lo, hi), valid.iter().map(|(t, _, r)| (*t, *r)));
    let maxima: Vec<f64> = octaves.iter().map(|o| o.max).collect();
    let med = median(&maxima).unwrap_or(f64::NAN);
    Ok(Lemma11Report {
        max_ratio: best.2,
        argmax: (best.0, best.1),
        spread: maxima.iter().copied().fold(0.0, f64::max) / med,
        octaves,
        skipped,
    })
}

/// Parameter grid for the annulus bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma12Grid<T> {
    pub radii: Vec<T>,
    pub widths: Vec<T>,
    pub freqs: Vec<T>,
    pub angles: Vec<T>,
}

impl<T: Real> Lemma12Grid<T> {
    /// `R ∈ {1, 2, 4}`, `δ ∈ {10⁻¹, 10⁻², 10⁻³}`, `|ξ| ∈ {4, 8, …, 256}` and
    /// `angles` uniform directions in `[0, π)`.
    pub fn dyadic(angles: usize) -> Self {
        let pi = std::f64::consts::PI;
        Self {
            radii: [1.0, 2.0, 4.0].map(T::lit).to_vec(),
            widths: [1e-1, 1e-2, 1e-3].map(T::lit).to_vec(),
            freqs: (2..=8).map(|k| T::lit(2f64.powi(k))).collect(),
            angles: (0..angles.max(1)).map(|k| T::lit(pi * k as f64 / angles.max(1) as f64)).collect(),
        }
    }

    /// Inserts the geometric mean between neighbouring radii, widths and
    /// frequencies, and doubles the angular resolution.
    pub fn refined(&self) -> Self {
        let geo = |v: &[T]| {
            let mut out = Vec::with_capacity(2 * v.len());
            for w in v.windows(2) {
                out.push(w[0]);
                out.push((w[0] * w[1]).sqrt());
            }
            out.extend(v.last().copied());
            out
        };
        let n = self.angles.len() * 2;
        let pi = std::f64::consts::PI;
        Self {
            radii: geo(&self.radii),
            widths: geo(&self.widths),
            freqs: geo(&self.freqs),
            angles: (0..n).map(|k| T::lit(pi * k as f64 / n as f64)).collect(),
        }
    }
}

/// Largest ratio whose growth exponent in `|ξ|` still counts as bounded.
pub const GROWTH_LIMIT: f64 = 0.25;

/// Annulus bound `|χ̂_{A_{R,δ}}(ξ)| ≤ C R^{1/2}|ξ|^{−1/2} min(|ξ|^{−1}, δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma12Report {
    /// Grid supremum of `|χ̂_A| / (R^{1/2}|ξ|^{−1/2} min(|ξ|^{−1}, δ))`.
    pub max_c: f64,
    /// `(R, δ, |ξ|, θ)` attaining `max_c`.
    pub argmax: (f64, f64, f64, f64),
    /// `(|ξ|, largest ratio at that frequency)`.
    pub per_freq: Vec<(f64, f64)>,
    /// Log-log slope of `per_freq`.
    pub growth_exponent: f64,
    /// Whether the body satisfies the square-root chord condition.
    pub hypothesis: bool,
    /// `hypothesis` holds and `growth_exponent < GROWTH_LIMIT`.
    pub bounded: bool,
}

/// Evaluates the annulus bound over `grid` (`R ∈ [1, 8]`, `δ ∈ [10⁻³, 10⁻¹]`,
/// `|ξ| ∈ [4, 256]`). Bodies failing the chord condition are still
/// evaluated; the report marks the hypothesis as violated.
pub fn lemma12_check<T: Real>(body: &ConvexBody<T>, grid: &Lemma12Grid<T>) -> Result<Lemma12Report> {
    if body.dim() != 2 {
        return Err(Error::Capability("annulus bounds are planar".into()));
    }
    check_grid("R", &grid.radii, 1.0, 8.0)?;
    check_grid("delta", &grid.widths, 1e-3, 1e-1)?;
    let freqs = check_grid("|xi|", &grid.freqs, 4.0, 256.0)?;
    if grid.angles.is_empty() {
        return Err(Error::Argument("empty angle grid".into()));
    }
    let mut specs = Vec::new();
    for &r in &grid.radii {
        for &d in &grid.widths {
            specs.push(AnnulusSpec::new(r, d)?);
        }
    }
    let r_top = grid.radii.iter().copied().fold(T::zero(), T::max) + grid.widths.iter().copied().fold(T::zero(), T::max);
    let mut rows: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
    for &f in &grid.freqs {
        let ev = Evaluator::new(body, Kind::Body, f * r_top, Method::Auto)?;
        let chunk: Vec<Vec<(f64, f64, f64, f64, f64)>> = grid
            .angles
            .par_iter()
            .map(|&th| {
                let (c, s) = (th.cos(), th.sin());
                let big_f = |r: T| r * r * ev.eval(&[c * f * r, s * f * r]);
                specs
                    .iter()
                    .map(|a| {
                        let outer = a.radius() + a.width();
                        let v = (big_f(outer) - big_f(a.radius())).abs();
                        let rhs = a.radius().sqrt() / f.sqrt() * f.recip().min(a.width());
                        let q = |x: T| x.to_f64_lossy();
                        (q(a.radius()), q(a.width()), q(f), q(th), q(v / rhs))
                    })
                    .collect()
            })
            .collect();
        rows.extend(chunk.into_iter().flatten());
    }
    let best = rows
        .iter()
        .copied()
        .max_by(|a, b| a.4.total_cmp(&b.4))
        .expect("grid is nonempty");
    let per_freq: Vec<(f64, f64)> = freqs
        .iter()
        .map(|f| {
            let m = rows.iter().filter(|r| r.2 == *f).map(|r| r.4).fold(0.0, f64::max);
            (*f, m)
        })
        .collect();
    let growth_exponent = if per_freq.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = per_freq.iter().copied().unzip();
        fit_power_law(&xs, &ys).map_or(f64::NAN, |l| l.slope)
    } else {
        f64::NAN
    };
    let directions = DEFAULT_DIRECTIONS;
    let wmin = body.min_width(directions);
    let eps: Vec<T> = (2..22).map(|k| wmin * T::lit(2f64.powi(-k))).collect();
    let hypothesis = curvature_condition(body, &eps, directions)?.satisfied;
    Ok(Lemma12Report {
        max_c: best.4,
        argmax: (best.0, best.1, best.2, best.3),
        per_freq,
        growth_exponent,
        hypothesis,
        bounded: hypothesis && growth_exponent < GROWTH_LIMIT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lemma11_along_normal() {
        let sq = ConvexBody::<f64>::square();
        let ts: Vec<f64> = (0..40).map(|k| 4.0 * 1.1f64.powi(k) + 0.37).collect();
        let rep = lemma11_check(&sq, &ts, &[0.0]).unwrap();
        // t|χ̂| = 2|sin 2πt|/π and l = 2 on each side
        assert!(rep.max_ratio <= 1.0 / std::f64::consts::PI + 1e-12);
        assert_eq!(rep.skipped, 0);
    }

    #[test]
    fn lemma11_rejects_out_of_range_t() {
        let sq = ConvexBody::<f64>::square();
        assert!(matches!(lemma11_check(&sq, &[2.0], &[0.0]), Err(Error::Range(_))));
    }

    #[test]
    fn refined_grid_inserts_midpoints() {
        let g = Lemma12Grid::<f64>::dyadic(4).refined();
        assert_eq!(g.radii.len(), 5);
        assert_eq!(g.widths.len(), 5);
        assert_eq!(g.freqs.len(), 13);
        assert_eq!(g.angles.len(), 8);
        assert!((g.radii[1] - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn square_annulus_ratio_grows() {
        let sq = ConvexBody::<f64>::square();
        let mut g = Lemma12Grid::<f64>::dyadic(1);
        g.angles = vec![0.0];
        let rep = lemma12_check(&sq, &g).unwrap();
        assert!(!rep.hypothesis);
        assert!(!rep.bounded);
        assert!(rep.growth_exponent > 0.4, "{}", rep.growth_exponent);
    }
}
