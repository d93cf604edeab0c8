//! Origin-symmetric convex polygons over an ordered field.
//!
//! Everything here is written against [`Field`], so the same code runs on
//! `f64` and on exact rationals. Face functionals `n·x ≤ c` use the
//! unnormalised outward normal `n = (Δy, −Δx)` of each counterclockwise
//! edge, which keeps gauges rational when vertices are.

use crate::error::{Error, Result};
use crate::scalar::{two, Field};

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<S> {
    vertices: Vec<[S; 2]>,
}

#[inline]
fn cross<S: Field>(a: [S; 2], b: [S; 2]) -> S {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
fn dot<S: Field>(a: [S; 2], b: [S; 2]) -> S {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn sub<S: Field>(a: [S; 2], b: [S; 2]) -> [S; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

impl<S: Field> Polygon<S> {
    /// Validates a full counterclockwise vertex list.
    ///
    /// Requires an even count of at least four, `v[i + n/2] = −v[i]`
    /// exactly, and strict convexity (no repeated or collinear vertices).
    pub fn new(vertices: Vec<[S; 2]>) -> Result<Self> {
        let n = vertices.len();
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidBody(format!(
                "polygon needs an even number (>= 4) of vertices, got {n}"
            )));
        }
        let h = n / 2;
        for i in 0..h {
            let (a, b) = (vertices[i], vertices[i + h]);
            if a[0] + b[0] != S::zero() || a[1] + b[1] != S::zero() {
                return Err(Error::InvalidBody(format!(
                    "polygon is not origin-symmetric: vertex {i} and {} are not opposite",
                    i + h
                )));
            }
        }
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            if cross(sub(b, a), sub(c, b)) <= S::zero() {
                return Err(Error::InvalidBody(format!(
                    "polygon is not strictly convex counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Builds the polygon from its first half; the rest is `−half`.
    pub fn from_half(half: &[[S; 2]]) -> Result<Self> {
        let mut v = half.to_vec();
        v.extend(half.iter().map(|p| [-p[0], -p[1]]));
        Self::new(v)
    }

    pub fn vertices(&self) -> &[[S; 2]] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Counterclockwise edges `(start, end)`.
    pub fn edges(&self) -> impl Iterator<Item = ([S; 2], [S; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Face functionals `(n, c)` with `n·x ≤ c` on the polygon and `c > 0`.
    pub fn faces(&self) -> impl Iterator<Item = ([S; 2], S)> + '_ {
        self.edges().map(|(a, b)| {
            let n = [b[1] - a[1], a[0] - b[0]];
            (n, dot(n, a))
        })
    }

    /// `||x||_K = max_i (n_i·x)/c_i`.
    pub fn gauge(&self, x: [S; 2]) -> S {
        self.faces()
            .map(|(n, c)| dot(n, x) / c)
            .fold(S::zero(), |m, v| if v > m { v } else { m })
    }

    /// `sup_{x∈K} x·dir` for an arbitrary (not necessarily unit) vector.
    pub fn support(&self, dir: [S; 2]) -> S {
        self.support_vertex(dir).1
    }

    /// Maximising vertex and the maximum of `v·dir`.
    pub fn support_vertex(&self, dir: [S; 2]) -> ([S; 2], S) {
        let mut best = (self.vertices[0], dot(self.vertices[0], dir));
        for &v in &self.vertices[1..] {
            let d = dot(v, dir);
            if d > best.1 {
                best = (v, d);
            }
        }
        best
    }

    /// Intersection of the polygon with the line `{x : x·dir = level}`,
    /// returned as the range of the coordinate `x·dir⊥` with
    /// `dir⊥ = (−dir_y, dir_x)`. `None` if the line misses the polygon.
    pub fn section(&self, dir: [S; 2], level: S) -> Option<(S, S)> {
        let perp = [-dir[1], dir[0]];
        let mut lo: Option<S> = None;
        let mut hi: Option<S> = None;
        let mut push = |u: S| {
            lo = Some(match lo {
                Some(l) if l <= u => l,
                _ => u,
            });
            hi = Some(match hi {
                Some(h) if h >= u => h,
                _ => u,
            });
        };
        for (a, b) in self.edges() {
            let fa = dot(a, dir) - level;
            let fb = dot(b, dir) - level;
            if fa == S::zero() {
                push(dot(a, perp));
            }
            if (fa < S::zero() && fb > S::zero()) || (fa > S::zero() && fb < S::zero()) {
                let t = fa / (fa - fb);
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                push(dot(p, perp));
            }
        }
        Some((lo?, hi?))
    }

    /// Chord length at depth `eps` below the support line in direction
    /// `dir`, which must be a unit vector for the result to be a length.
    /// `None` when `eps` is outside `[0, width]`.
    pub fn chord(&self, dir: [S; 2], eps: S) -> Option<S> {
        let s = self.support(dir);
        let width = s + self.support([-dir[0], -dir[1]]);
        if eps < S::zero() || eps > width {
            return None;
        }
        self.section(dir, s - eps).map(|(lo, hi)| hi - lo)
    }

    /// Shoelace area.
    pub fn area(&self) -> S {
        let twice = self
            .edges()
            .map(|(a, b)| cross(a, b))
            .fold(S::zero(), |acc, v| acc + v);
        twice / two()
    }

    /// Converts coordinates, e.g. rationals to floats.
    pub fn map<T: Field>(&self, f: impl Fn(S) -> T) -> Polygon<T> {
        Polygon {
            vertices: self.vertices.iter().map(|v| [f(v[0]), f(v[1])]).collect(),
        }
    }

    /// Scales every vertex by `t > 0`.
    pub fn scaled(&self, t: S) -> Self {
        self.map(|x| x * t)
    }
}
