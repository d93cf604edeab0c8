//! Origin-symmetric convex bodies and the norms they induce.
//!
//! A [`ConvexBody`] is one of a few representations:
//!
//! - a planar polygon (optionally with exact rational vertices),
//! - an axis-aligned ellipsoid in any dimension,
//! - an `l^p` unit ball in any dimension (`p = ∞` allowed),
//! - an axis-aligned box in any dimension,
//! - a planar radial body, sampled on a uniform angular grid and joined
//!   piecewise linearly in boundary points.
//!
//! Closed-form families answer gauge and support queries exactly. Planar
//! bodies additionally expose chords at a given depth below a support line
//! and a boundary parametrisation used by the Fourier module.

mod boundary;
mod curvature;
mod polygon;
mod spec;

pub use boundary::{PlanarBoundary, SmoothCurve};
pub use curvature::{curvature_condition, CurvatureReport, DEFAULT_DIRECTIONS};
pub use polygon::Polygon;
pub use spec::BodySpec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Real};

/// Representation of a [`ConvexBody`].
#[derive(Debug, Clone, PartialEq)]
pub enum Shape<T> {
    Polygon(Polygon<T>),
    /// Semi-axis lengths, one per coordinate.
    Ellipsoid(Vec<T>),
    /// Unit ball of the `l^p` norm; `p` may be `+∞`.
    LpBall { dim: usize, p: T },
    /// Half side lengths, one per coordinate.
    Box(Vec<T>),
    /// Radii `r(2πk/n)`, `k = 0..n`, with `r` π-periodic.
    Radial2D(Vec<T>),
}

/// A bounded, origin-symmetric convex body with nonempty interior.
#[derive(Debug, Clone)]
pub struct ConvexBody<T: Real> {
    shape: Shape<T>,
    /// Polygonal boundary for every planar body that is a polygon.
    outline: Option<Polygon<T>>,
    exact: Option<Polygon<Rational>>,
    inradius: T,
    circumradius: T,
}

/// Unit vector; in the plane usually built from an angle.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction<T> {
    coords: Vec<T>,
}

impl<T: Real> Direction<T> {
    /// `ω = (cos θ, sin θ)`.
    pub fn from_angle(theta: T) -> Self {
        Self {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    /// Checks unit length to within `1e-12` (or a few ulps for `f32`).
    pub fn new(coords: Vec<T>) -> Result<Self> {
        let n2: T = coords.iter().map(|c| *c * *c).sum();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
        if coords.is_empty() || (n2.sqrt() - T::one()).abs() > tol {
            return Err(Error::Argument(format!(
                "direction must have unit length, got |ω| = {}",
                n2.sqrt()
            )));
        }
        Ok(Self { coords })
    }

    /// Normalises a nonzero vector.
    pub fn normalize(coords: &[T]) -> Result<Self> {
        let n: T = coords.iter().map(|c| *c * *c).sum::<T>().sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Argument("cannot normalise a zero vector".into()));
        }
        Ok(Self {
            coords: coords.iter().map(|c| *c / n).collect(),
        })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn planar(&self) -> [T; 2] {
        [self.coords[0], self.coords[1]]
    }

    pub fn angle(&self) -> T {
        self.coords[1].atan2(self.coords[0])
    }

    pub fn opposite(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -*c).collect(),
        }
    }
}

/// Chord at depth `depth` below the support line with outer normal
/// `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordQuery<T> {
    pub direction: Direction<T>,
    pub depth: T,
}

impl<T: Real> ChordQuery<T> {
    pub fn new(theta: T, depth: T) -> Self {
        Self {
            direction: Direction::from_angle(theta),
            depth,
        }
    }
}

fn check_positive<T: Real>(what: &str, v: &[T]) -> Result<()> {
    if v.iter().any(|x| !(x.is_finite() && *x > T::zero())) {
        return Err(Error::InvalidBody(format!(
            "{what} must be finite and positive"
        )));
    }
    Ok(())
}

fn lp_norm<T: Real>(x: &[T], p: T) -> T {
    if p.is_infinite() {
        return x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    }
    if p == T::one() {
        return x.iter().map(|v| v.abs()).sum();
    }
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = x.iter().map(|v| (v.abs() / scale).powf(p)).sum();
    scale * s.powf(p.recip())
}

/// Conjugate exponent `p' = p/(p−1)`.
fn conjugate<T: Real>(p: T) -> T {
    if p.is_infinite() {
        T::one()
    } else if p == T::one() {
        T::infinity()
    } else {
        p / (p - T::one())
    }
}

impl<T: Real> ConvexBody<T> {
    fn finish(shape: Shape<T>, outline: Option<Polygon<T>>) -> Result<Self> {
        let (inradius, circumradius) = match (&shape, &outline) {
            (_, Some(poly)) => {
                let inr = poly
                    .faces()
                    .map(|(n, c)| c / (n[0] * n[0] + n[1] * n[1]).sqrt())
                    .fold(T::infinity(), T::min);
                let circ = poly
                    .vertices()
                    .iter()
                    .map(|v| v[0].hypot(v[1]))
                    .fold(T::zero(), T::max);
                (inr, circ)
            }
            (Shape::Ellipsoid(a), None) => (
                a.iter().copied().fold(T::infinity(), T::min),
                a.iter().copied().fold(T::zero(), T::max),
            ),
            (Shape::Box(h), None) => (
                h.iter().copied().fold(T::infinity(), T::min),
                h.iter().map(|v| *v * *v).sum::<T>().sqrt(),
            ),
            (Shape::LpBall { dim, p }, None) => {
                let d = T::lit(*dim as f64);
                let corner = if p.is_infinite() {
                    d.sqrt()
                } else {
                    d.powf(T::lit(0.5) - p.recip())
                };
                if *p >= T::lit(2.0) {
                    (T::one(), corner)
                } else {
                    (corner, T::one())
                }
            }
            _ => unreachable!("planar polygonal shapes always carry an outline"),
        };
        if !(inradius > T::zero()) || !circumradius.is_finite() {
            return Err(Error::InvalidBody("degenerate body (zero inradius)".into()));
        }
        Ok(Self {
            shape,
            outline,
            exact: None,
            inradius,
            circumradius,
        })
    }

    /// Polygon from a full counterclockwise, origin-symmetric vertex list.
    pub fn polygon(vertices: Vec<[T; 2]>) -> Result<Self> {
        let poly = Polygon::new(vertices)?;
        Self::finish(Shape::Polygon(poly.clone()), Some(poly))
    }

    /// Polygon from its first half of vertices.
    pub fn polygon_from_half(half: &[[T; 2]]) -> Result<Self> {
        let poly = Polygon::from_half(half)?;
        Self::finish(Shape::Polygon(poly.clone()), Some(poly))
    }

    /// Polygon with exact rational vertices; exact gauges remain available
    /// through [`ConvexBody::exact_polygon`].
    pub fn exact_polygon_body(poly: Polygon<Rational>) -> Result<Self> {
        let float = poly.map(|r| T::lit(rational_to_f64(r)));
        let float = Polygon::new(float.vertices().to_vec())?;
        let mut body = Self::finish(Shape::Polygon(float.clone()), Some(float))?;
        body.exact = Some(poly);
        Ok(body)
    }

    /// Random symmetric polygon with `2·half` vertices, radii in
    /// `[0.7, 1.3]`, angles drawn in `[0, π)`. Retries until convex.
    pub fn random_symmetric_polygon(half: usize, seed: u64) -> Result<Self> {
        if half < 2 {
            return Err(Error::Argument("need at least 2 half vertices".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let mut angles: Vec<f64> = (0..half)
                .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
                .collect();
            angles.sort_by(|a, b| a.total_cmp(b));
            let pts: Vec<[T; 2]> = angles
                .iter()
                .map(|a| {
                    let r: f64 = rng.gen_range(0.7..1.3);
                    [T::lit(r * a.cos()), T::lit(r * a.sin())]
                })
                .collect();
            if let Ok(body) = Self::polygon_from_half(&pts) {
                return Ok(body);
            }
        }
        Err(Error::InvalidBody("could not draw a convex polygon".into()))
    }

    /// Axis-aligned ellipsoid with the given semi-axes (`d ≥ 2`).
    pub fn ellipsoid(axes: Vec<T>) -> Result<Self> {
        if axes.len() < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        check_positive("semi-axes", &axes)?;
        Self::finish(Shape::Ellipsoid(axes), None)
    }

    /// Euclidean unit disk.
    pub fn disk() -> Self {
        Self::ellipsoid(vec![T::one(), T::one()]).expect("unit disk is valid")
    }

    /// Unit ball of `l^p` in dimension `dim`; `p ∈ [1, ∞]`.
    pub fn lp_ball(dim: usize, p: T) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        if !(p >= T::one()) {
            return Err(Error::InvalidBody(format!("l^p exponent must be >= 1, got {p}")));
        }
        let outline = if dim == 2 && (p == T::one() || p.is_infinite()) {
            let (o, z) = (T::one(), T::zero());
            Some(if p.is_infinite() {
                Polygon::from_half(&[[o, -o], [o, o]])?
            } else {
                Polygon::from_half(&[[o, z], [z, o]])?
            })
        } else {
            None
        };
        let mut body = Self::finish(Shape::LpBall { dim, p }, outline)?;
        if dim == 2 && body.outline.is_some() {
            let (o, z) = (Rational::from_integer(1), Rational::from_integer(0));
            body.exact = Some(if p.is_infinite() {
                Polygon::from_half(&[[o, -o], [o, o]])?
            } else {
                Polygon::from_half(&[[o, z], [z, o]])?
            });
        }
        Ok(body)
    }

    /// The square `[−1, 1]²` (unit ball of `l^∞`).
    pub fn square() -> Self {
        Self::lp_ball(2, T::infinity()).expect("square is valid")
    }

    /// Axis-aligned box `Π [−h_i, h_i]`.
    pub fn cuboid(half_widths: Vec<T>) -> Result<Self> {
        if half_widths.len() < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        check_positive("half widths", &half_widths)?;
        let outline = if half_widths.len() == 2 {
            let (a, b) = (half_widths[0], half_widths[1]);
            Some(Polygon::from_half(&[[a, -b], [a, b]])?)
        } else {
            None
        };
        let mut body = Self::finish(Shape::Box(half_widths.clone()), outline)?;
        if half_widths.len() == 2 {
            let ints: Option<Vec<Rational>> = half_widths
                .iter()
                .map(|h| crate::scalar::integral_rational(h.to_f64_lossy()))
                .collect();
            if let Some(h) = ints {
                body.exact = Some(Polygon::from_half(&[[h[0], -h[1]], [h[0], h[1]]])?);
            }
        }
        Ok(body)
    }

    /// Planar radial body from radii on the grid `θ_k = 2πk/n`. The second
    /// half of the samples must repeat the first (origin symmetry); the
    /// boundary is the polygon through the sampled boundary points, and
    /// convexity is checked by the sign of consecutive edge cross products.
    pub fn radial(radii: Vec<T>) -> Result<Self> {
        let n = radii.len();
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidBody(format!(
                "radial body needs an even number (>= 8) of samples, got {n}"
            )));
        }
        check_positive("radii", &radii)?;
        let h = n / 2;
        for k in 0..h {
            let (a, b) = (radii[k], radii[k + h]);
            if (a - b).abs() > T::lit(1e-12) * a.max(b) {
                return Err(Error::InvalidBody(format!(
                    "radial samples not symmetric: r[{k}] = {a} but r[{}] = {b}",
                    k + h
                )));
            }
        }
        let tau = T::lit(std::f64::consts::TAU);
        let half: Vec<[T; 2]> = (0..h)
            .map(|k| {
                let th = tau * T::lit(k as f64) / T::lit(n as f64);
                [radii[k] * th.cos(), radii[k] * th.sin()]
            })
            .collect();
        let poly = Polygon::from_half(&half)
            .map_err(|e| Error::InvalidBody(format!("radial samples: {e}")))?;
        Self::finish(Shape::Radial2D(radii), Some(poly))
    }

    pub fn shape(&self) -> &Shape<T> {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Polygon(_) | Shape::Radial2D(_) => 2,
            Shape::Ellipsoid(a) => a.len(),
            Shape::Box(h) => h.len(),
            Shape::LpBall { dim, .. } => *dim,
        }
    }

    /// Polygonal boundary, when the body is a planar polygon.
    pub fn outline(&self) -> Option<&Polygon<T>> {
        self.outline.as_ref()
    }

    /// Exact rational copy of a polygonal body, when one is known.
    pub fn exact_polygon(&self) -> Option<&Polygon<Rational>> {
        self.exact.as_ref()
    }

    pub fn inradius(&self) -> T {
        self.inradius
    }

    pub fn circumradius(&self) -> T {
        self.circumradius
    }

    /// Euclidean diameter (twice the circumradius for symmetric bodies).
    pub fn diameter(&self) -> T {
        self.circumradius + self.circumradius
    }

    /// True when every rotation about the origin maps the body to itself.
    pub fn is_rotation_invariant(&self) -> bool {
        match &self.shape {
            Shape::Ellipsoid(a) => a.iter().all(|v| *v == a[0]),
            Shape::LpBall { p, .. } => *p == T::lit(2.0),
            _ => false,
        }
    }

    /// `||x||_K = inf{t > 0 : x/t ∈ K}`.
    ///
    /// Panics if `x` does not have the body's dimension.
    pub fn gauge(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        if let Some(poly) = &self.outline {
            return poly.gauge([x[0], x[1]]);
        }
        match &self.shape {
            Shape::Ellipsoid(a) => {
                let scaled: Vec<T> = x.iter().zip(a).map(|(xi, ai)| *xi / *ai).collect();
                lp_norm(&scaled, T::lit(2.0))
            }
            Shape::LpBall { p, .. } => lp_norm(x, *p),
            Shape::Box(h) => x
                .iter()
                .zip(h)
                .fold(T::zero(), |m, (xi, hi)| m.max(xi.abs() / *hi)),
            Shape::Polygon(_) | Shape::Radial2D(_) => unreachable!(),
        }
    }

    /// Support function `S(ω) = sup_{x∈K} x·ω`.
    pub fn support(&self, dir: &Direction<T>) -> T {
        self.support_vec(dir.coords())
    }

    /// Support function at an arbitrary vector (positively homogeneous).
    pub fn support_vec(&self, w: &[T]) -> T {
        assert_eq!(w.len(), self.dim(), "direction dimension mismatch");
        if let Some(poly) = &self.outline {
            return poly.support([w[0], w[1]]);
        }
        match &self.shape {
            Shape::Ellipsoid(a) => {
                let scaled: Vec<T> = w.iter().zip(a).map(|(wi, ai)| *wi * *ai).collect();
                lp_norm(&scaled, T::lit(2.0))
            }
            Shape::LpBall { p, .. } => lp_norm(w, conjugate(*p)),
            Shape::Box(h) => w.iter().zip(h).map(|(wi, hi)| wi.abs() * *hi).sum(),
            Shape::Polygon(_) | Shape::Radial2D(_) => unreachable!(),
        }
    }

    /// Support in the planar direction `θ`.
    pub fn support_angle(&self, theta: T) -> T {
        self.support(&Direction::from_angle(theta))
    }

    /// A boundary point attaining the support value in direction `w`.
    pub fn support_point(&self, w: &[T]) -> Vec<T> {
        assert_eq!(w.len(), self.dim(), "direction dimension mismatch");
        if let Some(poly) = &self.outline {
            let (v, _) = poly.support_vertex([w[0], w[1]]);
            return v.to_vec();
        }
        let sgn = |v: T| {
            if v > T::zero() {
                T::one()
            } else if v < T::zero() {
                -T::one()
            } else {
                T::zero()
            }
        };
        match &self.shape {
            Shape::Ellipsoid(a) => {
                let s = self.support_vec(w);
                w.iter().zip(a).map(|(wi, ai)| *ai * *ai * *wi / s).collect()
            }
            Shape::Box(h) => w.iter().zip(h).map(|(wi, hi)| sgn(*wi) * *hi).collect(),
            Shape::LpBall { p, .. } => {
                if p.is_infinite() {
                    w.iter().map(|wi| sgn(*wi)).collect()
                } else if *p == T::one() {
                    let (j, _) = w.iter().enumerate().fold((0, T::zero()), |best, (i, v)| {
                        if v.abs() > best.1 {
                            (i, v.abs())
                        } else {
                            best
                        }
                    });
                    let mut x = vec![T::zero(); w.len()];
                    x[j] = sgn(w[j]);
                    x
                } else {
                    let q = conjugate(*p);
                    let nq = lp_norm(w, q);
                    w.iter()
                        .map(|wi| sgn(*wi) * (wi.abs() / nq).powf(q - T::one()))
                        .collect()
                }
            }
            Shape::Polygon(_) | Shape::Radial2D(_) => unreachable!(),
        }
    }

    /// Width `S(ω) + S(−ω) = 2 S(ω)` in direction `ω`.
    pub fn width(&self, dir: &Direction<T>) -> T {
        let s = self.support(dir);
        s + s
    }

    /// Smallest width over `directions` uniformly spaced planar angles.
    pub fn min_width(&self, directions: usize) -> T {
        let tau = T::lit(std::f64::consts::TAU);
        (0..directions.max(1))
            .map(|k| self.width(&Direction::from_angle(tau * T::lit(k as f64) / T::lit(directions as f64))))
            .fold(T::infinity(), T::min)
    }

    /// Length of the chord `{x ∈ K : x·ω = S(ω) − ε}` (planar bodies).
    ///
    /// Polygons are clipped edge by edge; other bodies locate the two chord
    /// endpoints by bisection on the gauge along the chord line.
    pub fn chord_length(&self, q: &ChordQuery<T>) -> Result<T> {
        if self.dim() != 2 || q.direction.dim() != 2 {
            return Err(Error::Capability("chords are defined for planar bodies only".into()));
        }
        let w = q.direction.planar();
        let width = self.width(&q.direction);
        if !(q.depth > T::zero() && q.depth < width) {
            return Err(Error::Range(format!(
                "chord depth {} outside (0, {width})",
                q.depth
            )));
        }
        if let Some(poly) = &self.outline {
            return poly
                .chord(w, q.depth)
                .ok_or_else(|| Error::Range("chord line misses the polygon".into()));
        }
        Ok(self.chord_by_bisection(w, q.depth))
    }

    fn chord_by_bisection(&self, w: [T; 2], eps: T) -> T {
        let s = self.support_vec(&w);
        let xs = self.support_point(&w);
        let perp = [-w[1], w[0]];
        let level = s - eps;
        // (1 − ε/S)·x_s lies on the segment [x_s, −x_s] and on the chord line.
        let u0 = (xs[0] * perp[0] + xs[1] * perp[1]) * (T::one() - eps / s);
        let at = |u: T| [level * w[0] + u * perp[0], level * w[1] + u * perp[1]];
        let inside = |u: T| self.gauge(&at(u)) <= T::one();
        let reach = self.circumradius * T::lit(1.01) + u0.abs();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0) * self.circumradius);
        let edge = |mut a: T, mut b: T| {
            for _ in 0..200 {
                if (b - a).abs() <= tol {
                    break;
                }
                let m = (a + b) / T::lit(2.0);
                if inside(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            (a + b) / T::lit(2.0)
        };
        let hi = edge(u0, u0 + reach);
        let lo = edge(u0, u0 - reach);
        hi - lo
    }

    /// Area (planar) or volume.
    pub fn volume(&self) -> Result<T> {
        if let Some(poly) = &self.outline {
            return Ok(poly.area());
        }
        let d = self.dim();
        let ball = || {
            let pi = T::PI();
            let mut v = if d % 2 == 0 { T::one() } else { T::lit(2.0) };
            let mut k = if d % 2 == 0 { 2 } else { 3 };
            while k <= d {
                v = v * (pi + pi) / T::lit(k as f64);
                k += 2;
            }
            v
        };
        match &self.shape {
            Shape::Ellipsoid(a) => Ok(ball() * a.iter().copied().fold(T::one(), |p, x| p * x)),
            Shape::Box(h) => Ok(h.iter().fold(T::one(), |p, x| p * (*x + *x))),
            Shape::LpBall { p, .. } if *p == T::lit(2.0) => Ok(ball()),
            Shape::LpBall { p, .. } if p.is_infinite() => Ok(T::lit(2.0).powi(d as i32)),
            Shape::LpBall { p, .. } if *p == T::one() => {
                let fact = (1..=d).fold(T::one(), |f, k| f * T::lit(k as f64));
                Ok(T::lit(2.0).powi(d as i32) / fact)
            }
            _ if d == 2 => Ok(self.boundary()?.enclosed_area()),
            _ => Err(Error::Capability(format!(
                "volume of {:?} in dimension {d}",
                self.shape
            ))),
        }
    }

    /// Length of the boundary curve (planar bodies).
    pub fn perimeter(&self) -> Result<T> {
        Ok(self.boundary()?.length())
    }

    /// Boundary description used by quadrature (planar bodies).
    pub fn boundary(&self) -> Result<PlanarBoundary<'_, T>> {
        if self.dim() != 2 {
            return Err(Error::Capability(format!(
                "planar boundary requested for a {}-dimensional body",
                self.dim()
            )));
        }
        if let Some(poly) = &self.outline {
            return Ok(PlanarBoundary::Polygon(poly));
        }
        match &self.shape {
            Shape::Ellipsoid(a) => Ok(PlanarBoundary::Smooth(SmoothCurve::ellipse(a[0], a[1]))),
            Shape::LpBall { p, .. } => Ok(PlanarBoundary::Smooth(SmoothCurve::superellipse(*p))),
            _ => unreachable!("polygonal planar shapes carry an outline"),
        }
    }

    /// Body scaled by `t > 0`.
    pub fn scaled(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::Argument("scale must be positive".into()));
        }
        match &self.shape {
            Shape::Polygon(p) => Self::polygon(p.scaled(t).vertices().to_vec()),
            Shape::Ellipsoid(a) => Self::ellipsoid(a.iter().map(|v| *v * t).collect()),
            Shape::Box(h) => Self::cuboid(h.iter().map(|v| *v * t).collect()),
            Shape::Radial2D(r) => Self::radial(r.iter().map(|v| *v * t).collect()),
            Shape::LpBall { dim, p } => {
                if *p == T::lit(2.0) {
                    Self::ellipsoid(vec![t; *dim])
                } else if let Some(poly) = &self.outline {
                    Self::polygon(poly.scaled(t).vertices().to_vec())
                } else {
                    Err(Error::Capability("scaling a general l^p ball".into()))
                }
            }
        }
    }
}

/// Lossy rational to float conversion.
pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
