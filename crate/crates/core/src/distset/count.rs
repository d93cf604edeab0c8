use std::cmp::Ordering;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::points::rotate;
use super::{PointSet, Provenance};
use crate::body::{rational_to_f64, ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::scalar::{integral_rational, Rational, Real};

/// Relative tolerance below which two float distances are merged.
pub const FLOAT_TOLERANCE: f64 = 1e-9;
/// Largest number of pairs the all-pairs sweep will enumerate.
pub const PAIR_CAP: u64 = 200_000_000;

/// Arithmetic used for distance values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Rational gauges (squared for Euclidean norms); requires rational
    /// points and a norm with rational face data.
    ExactRational,
    /// `f64` gauges merged at relative tolerance [`FLOAT_TOLERANCE`].
    FloatTol,
}

/// Exact distance keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactKeys {
    /// Keys are squared distances (Euclidean and ellipsoidal norms).
    pub squared: bool,
    pub keys: Vec<Rational>,
}

/// Distinct nonzero distances of a point set with pair multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSet {
    /// Strictly increasing distinct values.
    pub values: Vec<f64>,
    /// Unordered pairs realising each value.
    pub multiplicities: Vec<u64>,
    /// Smallest difference of consecutive values.
    pub min_gap: Option<f64>,
    pub exact: Option<ExactKeys>,
}

impl DistanceSet {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Sum of multiplicities.
    pub fn pairs(&self) -> u64 {
        self.multiplicities.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Sorts and merges equal keys.
fn compress<K: Ord>(mut v: Vec<(K, u64)>) -> Vec<(K, u64)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(K, u64)> = Vec::with_capacity(v.len());
    for (k, m) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += m,
            _ => out.push((k, m)),
        }
    }
    out
}

fn merge_chunks<K: Ord>(chunks: Vec<Vec<(K, u64)>>) -> Vec<(K, u64)> {
    compress(chunks.into_iter().flatten().collect())
}

/// Gauge with exact rational arithmetic.
#[derive(Debug, Clone)]
enum ExactNorm {
    L1,
    LInf,
    /// `Σ w_i x_i²` (squared gauge), `w_i = a_i^{−2}`.
    Quadratic { weights: Vec<Rational>, unit: bool },
    /// `max |x_i|/h_i`.
    Box(Vec<Rational>),
    /// `max n·x` over face functionals normalised to `n·x = 1` on the face.
    Polygon(Vec<[Rational; 2]>),
}

impl ExactNorm {
    fn from_body<T: Real>(body: &ConvexBody<T>) -> Result<Self> {
        let rational = |v: &[T]| -> Option<Vec<Rational>> {
            v.iter().map(|x| integral_rational(x.to_f64_lossy())).collect()
        };
        let unsupported = || {
            Error::Capability(format!(
                "exact distances need a polygon with rational vertices, an l^1/l^2/l^∞ ball, or an \
                 ellipsoid/box with integer semi-axes; got {:?}",
                body.shape()
            ))
        };
        match body.shape() {
            Shape::LpBall { p, .. } if *p == T::one() => return Ok(ExactNorm::L1),
            Shape::LpBall { p, .. } if p.is_infinite() => return Ok(ExactNorm::LInf),
            Shape::LpBall { p, dim } if *p == T::lit(2.0) => {
                return Ok(ExactNorm::Quadratic {
                    weights: vec![Rational::from_integer(1); *dim],
                    unit: true,
                })
            }
            Shape::Ellipsoid(a) => {
                let a = rational(a).ok_or_else(unsupported)?;
                let unit = a.iter().all(|x| *x == Rational::from_integer(1));
                let weights = a.iter().map(|x| (*x * *x).recip()).collect();
                return Ok(ExactNorm::Quadratic { weights, unit });
            }
            Shape::Box(h) => {
                let h = rational(h).ok_or_else(unsupported)?;
                return Ok(ExactNorm::Box(h.iter().map(|x| x.recip()).collect()));
            }
            _ => {}
        }
        let poly = body.exact_polygon().ok_or_else(unsupported)?;
        Ok(ExactNorm::Polygon(
            poly.faces().map(|(n, c)| [n[0] / c, n[1] / c]).collect(),
        ))
    }

    fn squared(&self) -> bool {
        matches!(self, ExactNorm::Quadratic { .. })
    }

    fn key(&self, v: &[Rational]) -> Rational {
        let zero = Rational::from_integer(0);
        match self {
            ExactNorm::L1 => v.iter().fold(zero, |s, x| s + x.abs()),
            ExactNorm::LInf => v.iter().fold(zero, |m, x| m.max(x.abs())),
            ExactNorm::Quadratic { weights, .. } => v.iter().zip(weights).fold(zero, |s, (x, w)| s + *w * *x * *x),
            ExactNorm::Box(inv) => v.iter().zip(inv).fold(zero, |m, (x, w)| m.max(x.abs() * *w)),
            ExactNorm::Polygon(faces) => faces
                .iter()
                .map(|n| n[0] * v[0] + n[1] * v[1])
                .max()
                .expect("polygon has faces"),
        }
    }

    /// Same as [`ExactNorm::key`] on an integer vector, avoiding rational
    /// arithmetic for the integer-valued norms.
    fn key_int(&self, v: &[i64]) -> Rational {
        let int = |x: i128| Rational::from_integer(x);
        match self {
            ExactNorm::L1 => int(v.iter().map(|x| x.unsigned_abs() as i128).sum()),
            ExactNorm::LInf => int(v.iter().map(|x| x.unsigned_abs() as i128).max().unwrap_or(0)),
            ExactNorm::Quadratic { unit: true, .. } => int(v.iter().map(|x| (*x as i128) * (*x as i128)).sum()),
            _ => self.key(&v.iter().map(|x| int(*x as i128)).collect::<Vec<_>>()),
        }
    }
}

/// Visits the integer vectors of `[−q, q]^n` (odometer order).
fn for_each_box_vector(n: usize, q: i64, mut f: impl FnMut(&[i64])) {
    if n == 0 {
        f(&[]);
        return;
    }
    let mut v = vec![-q; n];
    loop {
        f(&v);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if v[i] < q {
                v[i] += 1;
                break;
            }
            v[i] = -q;
        }
    }
}

/// Difference vectors of `ℤ^d ∩ [0, q]^d`, one per ± pair (first nonzero
/// coordinate positive), with `Π (q + 1 − |v_i|)` realising pairs each.
fn lattice_keys<K: Ord + Send>(dim: usize, q: u64, key: impl Fn(&[i64]) -> K + Sync) -> Vec<(K, u64)> {
    let qi = q as i64;
    let chunks: Vec<Vec<(K, u64)>> = (0..=qi)
        .into_par_iter()
        .map(|v0| {
            let mut local = Vec::new();
            let mut v = vec![0i64; dim];
            v[0] = v0;
            for_each_box_vector(dim - 1, qi, |rest| {
                if v0 == 0 {
                    match rest.iter().find(|x| **x != 0) {
                        Some(x) if *x > 0 => {}
                        _ => return,
                    }
                }
                v[1..].copy_from_slice(rest);
                let weight = v.iter().map(|x| q + 1 - x.unsigned_abs()).product::<u64>();
                local.push((key(&v), weight));
            });
            compress(local)
        })
        .collect();
    merge_chunks(chunks)
}

/// All unordered pairs, visited bucket by bucket after sorting the points
/// into hash-grid cell order.
fn all_pair_keys<K: Ord + Send>(n: usize, order: &[usize], key: impl Fn(usize, usize) -> K + Sync) -> Vec<(K, u64)> {
    const BUCKET: usize = 256;
    let chunks: Vec<Vec<(K, u64)>> = (0..n.div_ceil(BUCKET))
        .into_par_iter()
        .map(|b| {
            let mut local = Vec::new();
            for a in b * BUCKET..((b + 1) * BUCKET).min(n) {
                for c in a + 1..n {
                    local.push((key(order[a], order[c]), 1));
                }
            }
            compress(local)
        })
        .collect();
    merge_chunks(chunks)
}

fn cell_order<T: Real>(s: &PointSet<T>) -> Vec<usize> {
    let n = s.len();
    let d = s.dim();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in s.iter() {
        for i in 0..d {
            lo[i] = lo[i].min(p[i].to_f64_lossy());
            hi[i] = hi[i].max(p[i].to_f64_lossy());
        }
    }
    let per_axis = (n as f64).powf(1.0 / d as f64).ceil().max(1.0);
    let cell: Vec<Vec<i64>> = s
        .iter()
        .map(|p| {
            (0..d)
                .map(|i| {
                    let ext = (hi[i] - lo[i]).max(f64::MIN_POSITIVE);
                    ((p[i].to_f64_lossy() - lo[i]) / ext * per_axis).floor() as i64
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| cell[*a].cmp(&cell[*b]).then(a.cmp(b)));
    order
}

fn exact_result(keys: Vec<(Rational, u64)>, squared: bool) -> DistanceSet {
    let to_f = |k: &Rational| {
        let v = rational_to_f64(*k);
        if squared {
            v.sqrt()
        } else {
            v
        }
    };
    let values: Vec<f64> = keys.iter().map(|(k, _)| to_f(k)).collect();
    let min_gap = keys
        .windows(2)
        .map(|w| {
            let diff = rational_to_f64(w[1].0 - w[0].0);
            if squared {
                diff / (to_f(&w[0].0) + to_f(&w[1].0))
            } else {
                diff
            }
        })
        .reduce(f64::min);
    DistanceSet {
        values,
        multiplicities: keys.iter().map(|(_, m)| *m).collect(),
        min_gap,
        exact: Some(ExactKeys {
            squared,
            keys: keys.into_iter().map(|(k, _)| k).collect(),
        }),
    }
}

/// Merges sorted float values: a value within `FLOAT_TOLERANCE·anchor` of
/// the current anchor joins it; otherwise it becomes the next anchor.
fn float_result(keys: Vec<(OrdF64, u64)>) -> DistanceSet {
    let mut values: Vec<f64> = Vec::new();
    let mut mult: Vec<u64> = Vec::new();
    for (OrdF64(v), m) in keys {
        match values.last() {
            Some(anchor) if v - anchor <= FLOAT_TOLERANCE * anchor => *mult.last_mut().expect("paired") += m,
            _ => {
                values.push(v);
                mult.push(m);
            }
        }
    }
    let min_gap = values.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    DistanceSet {
        values,
        multiplicities: mult,
        min_gap,
        exact: None,
    }
}

fn check_inputs<T: Real>(s: &PointSet<T>, body: &ConvexBody<T>) -> Result<()> {
    if s.dim() != body.dim() {
        return Err(Error::Argument(format!(
            "points have dimension {}, body has dimension {}",
            s.dim(),
            body.dim()
        )));
    }
    Ok(())
}

/// Distinct values of `||x − y||_K` over unordered pairs of distinct points.
///
/// Lattice windows and rotated lattice windows are counted through their
/// difference vectors; everything else goes through
/// [`distance_set_all_pairs`].
pub fn distance_set<T: Real>(s: &PointSet<T>, body: &ConvexBody<T>, mode: Mode) -> Result<DistanceSet> {
    check_inputs(s, body)?;
    match (s.provenance(), mode) {
        (Provenance::Lattice { q }, Mode::ExactRational) => {
            let norm = ExactNorm::from_body(body)?;
            Ok(exact_result(lattice_keys(s.dim(), *q, |v| norm.key_int(v)), norm.squared()))
        }
        (Provenance::Lattice { q }, Mode::FloatTol) => {
            let keys = lattice_keys(s.dim(), *q, |v| {
                let x: Vec<T> = v.iter().map(|c| T::lit(*c as f64)).collect();
                OrdF64(body.gauge(&x).to_f64_lossy())
            });
            Ok(float_result(keys))
        }
        (Provenance::Rotated { q, cos, sin, .. }, Mode::FloatTol) => {
            let (c, sn) = (*cos, *sin);
            let keys = lattice_keys(2, *q, |v| {
                let (x, y) = rotate(c, sn, v[0], v[1]);
                OrdF64(body.gauge(&[T::lit(x), T::lit(y)]).to_f64_lossy())
            });
            Ok(float_result(keys))
        }
        _ => distance_set_all_pairs(s, body, mode),
    }
}

/// Reference path: every unordered pair, capped at [`PAIR_CAP`] pairs.
pub fn distance_set_all_pairs<T: Real>(s: &PointSet<T>, body: &ConvexBody<T>, mode: Mode) -> Result<DistanceSet> {
    check_inputs(s, body)?;
    if s.pair_count() > PAIR_CAP {
        return Err(Error::Limit(format!(
            "{} pairs exceed the cap of {PAIR_CAP}",
            s.pair_count()
        )));
    }
    let order = cell_order(s);
    let d = s.dim();
    match mode {
        Mode::ExactRational => {
            let norm = ExactNorm::from_body(body)?;
            let exact = s.exact_coords().ok_or_else(|| {
                Error::Capability("exact mode needs rational point coordinates".into())
            })?;
            let keys = all_pair_keys(s.len(), &order, |i, j| {
                let v: Vec<Rational> = (0..d).map(|k| exact[j * d + k] - exact[i * d + k]).collect();
                norm.key(&v)
            });
            Ok(exact_result(keys, norm.squared()))
        }
        Mode::FloatTol => {
            let keys = all_pair_keys(s.len(), &order, |i, j| {
                let v: Vec<T> = s.point(j).iter().zip(s.point(i)).map(|(a, b)| *a - *b).collect();
                OrdF64(body.gauge(&v).to_f64_lossy())
            });
            Ok(float_result(keys))
        }
    }
}
