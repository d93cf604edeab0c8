use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{integral_rational, Rational, Real};

/// How a point set was generated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `ℤ^d ∩ [0, q]^d`.
    Lattice { q: u64 },
    /// `R_θ(ℤ² ∩ [0, q]²)`; `cos`/`sin` are the stored rotation.
    Rotated { q: u64, angle: f64, cos: f64, sin: f64 },
    /// Lattice points moved by independent uniform offsets in
    /// `[−jitter, jitter]^d`.
    Perturbed { q: u64, seed: u64, jitter: f64 },
    Explicit,
}

/// A finite set of distinct points in `ℝ^d`.
#[derive(Debug, Clone)]
pub struct PointSet<T> {
    dim: usize,
    coords: Vec<T>,
    exact: Option<Vec<Rational>>,
    provenance: Provenance,
}

/// Point set generators parameterised by `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    Lattice {
        #[serde(default = "two")]
        dim: usize,
    },
    Rotated {
        angle: f64,
    },
    Perturbed {
        #[serde(default = "two")]
        dim: usize,
        seed: u64,
        jitter: f64,
    },
}

fn two() -> usize {
    2
}

impl Family {
    pub fn build<T: Real>(&self, q: u64) -> Result<PointSet<T>> {
        match self {
            Family::Lattice { dim } => PointSet::lattice(*dim, q),
            Family::Rotated { angle } => PointSet::rotated(q, *angle),
            Family::Perturbed { dim, seed, jitter } => PointSet::perturbed(*dim, q, *seed, *jitter),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Family::Lattice { dim } | Family::Perturbed { dim, .. } => *dim,
            Family::Rotated { .. } => 2,
        }
    }
}

/// Lattice point count `(q+1)^d`, refusing sets beyond `10⁸` points.
fn lattice_size(dim: usize, q: u64) -> Result<usize> {
    if dim == 0 {
        return Err(Error::Argument("dimension must be positive".into()));
    }
    let side = q.checked_add(1).ok_or_else(|| Error::Argument("q too large".into()))?;
    let mut n: u64 = 1;
    for _ in 0..dim {
        n = n
            .checked_mul(side)
            .filter(|n| *n <= 100_000_000)
            .ok_or_else(|| Error::Limit(format!("lattice with q = {q} in dimension {dim} exceeds 1e8 points")))?;
    }
    Ok(n as usize)
}

/// Calls `f` on every integer point of `[0, q]^d` in lexicographic order.
fn for_each_lattice_point(dim: usize, q: u64, mut f: impl FnMut(&[i64])) {
    let mut p = vec![0i64; dim];
    loop {
        f(&p);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if p[i] < q as i64 {
                p[i] += 1;
                break;
            }
            p[i] = 0;
        }
    }
}

impl<T: Real> PointSet<T> {
    /// `ℤ^d ∩ [0, q]^d`.
    pub fn lattice(dim: usize, q: u64) -> Result<Self> {
        let n = lattice_size(dim, q)?;
        let mut coords = Vec::with_capacity(n * dim);
        for_each_lattice_point(dim, q, |p| coords.extend(p.iter().map(|v| T::lit(*v as f64))));
        Ok(Self {
            dim,
            coords,
            exact: None,
            provenance: Provenance::Lattice { q },
        })
    }

    /// The lattice window `ℤ² ∩ [0, q]²` rotated about the origin: points
    /// `(c p₀ − s p₁, s p₀ + c p₁)` with `(c, s) = (cos θ, sin θ)` evaluated
    /// once.
    pub fn rotated(q: u64, angle: f64) -> Result<Self> {
        let n = lattice_size(2, q)?;
        if !angle.is_finite() {
            return Err(Error::Argument("rotation angle must be finite".into()));
        }
        let (s, c) = angle.sin_cos();
        let mut coords = Vec::with_capacity(2 * n);
        for_each_lattice_point(2, q, |p| {
            let (x, y) = rotate(c, s, p[0], p[1]);
            coords.push(T::lit(x));
            coords.push(T::lit(y));
        });
        Ok(Self {
            dim: 2,
            coords,
            exact: None,
            provenance: Provenance::Rotated { q, angle, cos: c, sin: s },
        })
    }

    /// Lattice points with i.i.d. uniform offsets in `[−jitter, jitter]^d`
    /// drawn from a ChaCha8 stream seeded by `seed`.
    pub fn perturbed(dim: usize, q: u64, seed: u64, jitter: f64) -> Result<Self> {
        if !(jitter >= 0.0 && jitter < 0.5) {
            return Err(Error::Argument(format!("jitter must lie in [0, 0.5), got {jitter}")));
        }
        let n = lattice_size(dim, q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coords = Vec::with_capacity(n * dim);
        for_each_lattice_point(dim, q, |p| {
            for v in p {
                let off = if jitter > 0.0 { rng.gen_range(-jitter..=jitter) } else { 0.0 };
                coords.push(T::lit(*v as f64 + off));
            }
        });
        Ok(Self {
            dim,
            coords,
            exact: None,
            provenance: Provenance::Perturbed { q, seed, jitter },
        })
    }

    /// Arbitrary points; duplicates are removed and the remaining points
    /// sorted lexicographically.
    pub fn explicit(points: Vec<Vec<T>>) -> Result<Self> {
        let dim = check_points(&points)?;
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Argument("points must be finite".into()));
        }
        let mut points = points;
        points.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.partial_cmp(y).expect("finite"))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        points.dedup();
        Ok(Self {
            dim,
            coords: points.into_iter().flatten().collect(),
            exact: None,
            provenance: Provenance::Explicit,
        })
    }

    /// Points with exact rational coordinates, deduplicated exactly.
    pub fn from_rationals(points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = check_points(&points)?;
        let mut points = points;
        points.sort();
        points.dedup();
        let coords = points
            .iter()
            .flatten()
            .map(|r| T::lit(crate::body::rational_to_f64(*r)))
            .collect();
        Ok(Self {
            dim,
            coords,
            exact: Some(points.into_iter().flatten().collect()),
            provenance: Provenance::Explicit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Exact coordinates: the stored rationals, or the float coordinates
    /// when every one of them is an integer.
    pub fn exact_coords(&self) -> Option<Vec<Rational>> {
        if let Some(e) = &self.exact {
            return Some(e.clone());
        }
        self.coords
            .iter()
            .map(|v| integral_rational(v.to_f64_lossy()))
            .collect()
    }

    /// Number of unordered pairs.
    pub fn pair_count(&self) -> u64 {
        let n = self.len() as u64;
        n * n.saturating_sub(1) / 2
    }

    /// Copy with the points deleted for which `drop` returns true.
    pub fn without(&self, drop: impl Fn(&[T]) -> bool) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop(self.point(*i))).collect();
        let coords = keep.iter().flat_map(|i| self.point(*i).iter().copied()).collect();
        let exact = self.exact.as_ref().map(|e| {
            keep.iter()
                .flat_map(|i| e[i * self.dim..(i + 1) * self.dim].iter().copied())
                .collect()
        });
        Self {
            dim: self.dim,
            coords,
            exact,
            provenance: Provenance::Explicit,
        }
    }

    /// Copy with extra points appended (duplicates removed).
    pub fn with_points(&self, extra: Vec<Vec<T>>) -> Result<Self> {
        let mut all: Vec<Vec<T>> = self.iter().map(|p| p.to_vec()).collect();
        all.extend(extra);
        Self::explicit(all)
    }

    /// Every point rotated by `angle` about the origin (planar sets).
    pub fn rotate_all(&self, angle: f64) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::Capability("rotation is planar".into()));
        }
        let (s, c) = angle.sin_cos();
        let pts = self
            .iter()
            .map(|p| {
                let (x, y) = (p[0].to_f64_lossy(), p[1].to_f64_lossy());
                vec![T::lit(c * x - s * y), T::lit(s * x + c * y)]
            })
            .collect();
        Self::explicit(pts)
    }

    /// Every point scaled by `t`.
    pub fn scale_all(&self, t: Rational) -> Result<Self> {
        match self.exact_coords() {
            Some(e) => Self::from_rationals(e.chunks(self.dim).map(|p| p.iter().map(|v| *v * t).collect()).collect()),
            None => {
                let tf = T::lit(crate::body::rational_to_f64(t));
                Self::explicit(self.iter().map(|p| p.iter().map(|v| *v * tf).collect()).collect())
            }
        }
    }
}

#[inline]
pub(crate) fn rotate(c: f64, s: f64, p0: i64, p1: i64) -> (f64, f64) {
    let (a, b) = (p0 as f64, p1 as f64);
    (c * a - s * b, s * a + c * b)
}

fn check_points<S>(points: &[Vec<S>]) -> Result<usize> {
    let dim = points.first().map_or(0, |p| p.len());
    if dim == 0 {
        return Err(Error::Argument("point set must be nonempty with positive dimension".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Argument("points have mixed dimensions".into()));
    }
    Ok(dim)
}
