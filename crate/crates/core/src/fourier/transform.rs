use num_complex::Complex;
use rayon::prelude::*;

use super::{AnnulusSpec, Frequency};
use crate::body::{ConvexBody, Direction, PlanarBoundary, Polygon, Shape, SmoothCurve};
use crate::error::{Error, Result};
use crate::quadrature::{pairwise_sum, unit_panel_rule};
use crate::scalar::Real;

/// Which measure is transformed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Arc-length (surface) measure on `∂K`.
    Surface,
    /// Lebesgue measure on `K`.
    Body,
}

/// Evaluation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Closed forms for polygons and boxes, boundary quadrature otherwise.
    #[default]
    Auto,
    /// Boundary quadrature even where a closed form exists. `refine`
    /// multiplies the node count of the default rule.
    Quadrature { refine: usize },
}

impl Method {
    fn refine(self) -> usize {
        match self {
            Method::Auto => 1,
            Method::Quadrature { refine } => refine.max(1),
        }
    }
}

fn ceil_usize<T: Real>(x: T) -> usize {
    x.ceil().to_f64_lossy().max(0.0) as usize
}

/// Panels on the whole boundary for frequencies up to `freq`.
fn panel_floor<T: Real>(freq: T, diam: T) -> usize {
    ceil_usize(T::lit(16.0) * freq * diam).max(64)
}

/// `sin u / u`.
fn sinc<T: Real>(u: T) -> T {
    if u.abs() < T::lit(1e-4) {
        let u2 = u * u;
        T::one() - u2 / T::lit(6.0) + u2 * u2 / T::lit(120.0)
    } else {
        u.sin() / u
    }
}

/// `∫_{−h}^{h} e^{−2πi x t} dx = sin(2π h t)/(π t)`.
fn interval_ft<T: Real>(h: T, t: T) -> T {
    let two_h = h + h;
    two_h * sinc(T::PI() * two_h * t)
}

/// Sums `f(0), …, f(n−1)` in blocks, reducing the block sums pairwise.
fn block_sum<T: Real>(n: usize, f: impl Fn(usize) -> T) -> T {
    const BLOCK: usize = 64;
    let mut partial = Vec::with_capacity(n / BLOCK + 1);
    let mut start = 0;
    while start < n {
        let end = (start + BLOCK).min(n);
        let mut s = T::zero();
        for j in start..end {
            s += f(j);
        }
        partial.push(s);
        start = end;
    }
    pairwise_sum(&partial)
}

/// Quadrature nodes on half of a planar boundary.
///
/// Straight edges and general smooth curves use composite Gauss–Legendre
/// panels no longer than a quarter oscillation at the design frequency.
/// Ellipses use the periodic trapezoidal rule, which is spectrally
/// accurate for their analytic parametrisation once the node count
/// exceeds the bandwidth of `φ ↦ e^{−2πi x(φ)·ξ}`.
#[derive(Debug, Clone)]
pub struct BoundaryRule<T> {
    points: Vec<[T; 2]>,
    /// Weight times `|x'|`.
    arc: Vec<T>,
    /// Weight times the outer normal `(y', −x')`.
    normal: Vec<[T; 2]>,
}

impl<T: Real> BoundaryRule<T> {
    /// Rule accurate for `|ξ| ≤ max_freq`.
    pub fn new(boundary: &PlanarBoundary<'_, T>, diam: T, max_freq: T, refine: usize) -> Self {
        let refine = refine.max(1);
        match boundary {
            PlanarBoundary::Polygon(p) => Self::polygon(p, diam, max_freq, refine),
            PlanarBoundary::Smooth(c) => match c.ellipse_axes() {
                Some((a, b)) => Self::ellipse(a, b, max_freq, refine),
                None => Self::smooth(c, diam, max_freq, refine),
            },
        }
    }

    fn with_capacity(n: usize) -> Self {
        Self {
            points: Vec::with_capacity(n),
            arc: Vec::with_capacity(n),
            normal: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, x: [T; 2], d: [T; 2], w: T) {
        self.points.push(x);
        self.arc.push(w * d[0].hypot(d[1]));
        self.normal.push([w * d[1], -(w * d[0])]);
    }

    fn polygon(p: &Polygon<T>, diam: T, freq: T, refine: usize) -> Self {
        let (gx, gw) = unit_panel_rule();
        let half: Vec<_> = p.edges().take(p.len() / 2).collect();
        let length: T = half.iter().map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1])).sum();
        let floor = T::lit(panel_floor(freq, diam) as f64 / 2.0);
        let mut rule = Self::with_capacity(64 * gx.len() * refine);
        for (a, b) in half {
            let e = [b[0] - a[0], b[1] - a[1]];
            let len = e[0].hypot(e[1]);
            let panels = ceil_usize(floor * len / length)
                .max(ceil_usize(T::lit(4.0) * freq * len))
                .max(1)
                * refine;
            let h = T::one() / T::lit(panels as f64);
            for k in 0..panels {
                for (x, w) in gx.iter().zip(gw) {
                    let t = (T::lit(k as f64) + T::lit(*x)) * h;
                    rule.push([a[0] + t * e[0], a[1] + t * e[1]], e, T::lit(*w) * h);
                }
            }
        }
        rule
    }

    fn smooth(c: &SmoothCurve<T>, diam: T, freq: T, refine: usize) -> Self {
        let (gx, gw) = unit_panel_rule();
        let tau = T::lit(std::f64::consts::TAU);
        let full = panel_floor(freq, diam).max(ceil_usize(T::lit(4.0) * tau * freq * c.max_speed()));
        let panels = full.div_ceil(2) * refine;
        let h = T::PI() / T::lit(panels as f64);
        let mut rule = Self::with_capacity(panels * gx.len());
        for k in 0..panels {
            for (x, w) in gx.iter().zip(gw) {
                let (pt, d) = c.eval((T::lit(k as f64) + T::lit(*x)) * h);
                rule.push(pt, d, T::lit(*w) * h);
            }
        }
        rule
    }

    fn ellipse(a: T, b: T, freq: T, refine: usize) -> Self {
        let z = T::lit(std::f64::consts::TAU) * freq * a.max(b);
        let (lo, hi) = (a.min(b), a.max(b));
        // |x'| = (a² sin² + b² cos²)^{1/2} is analytic in a strip of this
        // half-width; its coefficients decay like e^{−strip·n}.
        let margin = if hi > lo {
            let strip = (lo / (hi * hi - lo * lo).sqrt()).asinh();
            ceil_usize(T::lit(36.0) / strip)
        } else {
            0
        };
        let n = (ceil_usize(z + T::lit(10.0) * z.cbrt()) + 16 + margin).max(32) * refine;
        let h = T::PI() / T::lit(n as f64);
        let curve = SmoothCurve::ellipse(a, b);
        let mut rule = Self::with_capacity(n);
        for k in 0..n {
            let (pt, d) = curve.eval(T::lit(k as f64) * h);
            rule.push(pt, d, h);
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `σ̂(ξ) = 2 ∫_{half} cos(2π x·ξ) ds`.
    pub fn surface(&self, xi: [T; 2]) -> T {
        let tau = T::lit(std::f64::consts::TAU);
        let s = block_sum(self.len(), |j| {
            let x = self.points[j];
            self.arc[j] * (tau * (x[0] * xi[0] + x[1] * xi[1])).cos()
        });
        s + s
    }

    /// `χ̂(ξ) = (π|ξ|²)^{−1} ∫_{half} (ξ·n) sin(2π x·ξ) ds`, `ξ ≠ 0`.
    pub fn body(&self, xi: [T; 2]) -> T {
        let tau = T::lit(std::f64::consts::TAU);
        let s = block_sum(self.len(), |j| {
            let x = self.points[j];
            let n = self.normal[j];
            (n[0] * xi[0] + n[1] * xi[1]) * (tau * (x[0] * xi[0] + x[1] * xi[1])).sin()
        });
        s / (T::PI() * (xi[0] * xi[0] + xi[1] * xi[1]))
    }
}

fn polygon_closed<T: Real>(p: &Polygon<T>, xi: [T; 2], kind: Kind) -> T {
    let tau = T::lit(std::f64::consts::TAU);
    let r2 = xi[0] * xi[0] + xi[1] * xi[1];
    let terms: Vec<T> = p
        .edges()
        .take(p.len() / 2)
        .map(|(a, b)| {
            let e = [b[0] - a[0], b[1] - a[1]];
            let m = [(a[0] + b[0]) / T::lit(2.0), (a[1] + b[1]) / T::lit(2.0)];
            let phase = tau * (m[0] * xi[0] + m[1] * xi[1]);
            let s = sinc(T::PI() * (e[0] * xi[0] + e[1] * xi[1]));
            match kind {
                Kind::Surface => T::lit(2.0) * e[0].hypot(e[1]) * phase.cos() * s,
                Kind::Body => (xi[0] * e[1] - xi[1] * e[0]) * phase.sin() * s / (T::PI() * r2),
            }
        })
        .collect();
    pairwise_sum(&terms)
}

fn box_closed<T: Real>(h: &[T], xi: &[T], kind: Kind) -> T {
    let factors: Vec<T> = h.iter().zip(xi).map(|(hi, t)| interval_ft(*hi, *t)).collect();
    match kind {
        Kind::Body => factors.iter().fold(T::one(), |p, f| p * *f),
        Kind::Surface => {
            let tau = T::lit(std::f64::consts::TAU);
            let faces: Vec<T> = (0..h.len())
                .map(|i| {
                    let rest = factors
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .fold(T::one(), |p, (_, f)| p * *f);
                    T::lit(2.0) * (tau * h[i] * xi[i]).cos() * rest
                })
                .collect();
            pairwise_sum(&faces)
        }
    }
}

#[derive(Debug, Clone)]
enum Mode<T> {
    Box(Vec<T>),
    Polygon,
    Rule(BoundaryRule<T>),
}

/// A transform prepared for repeated evaluation at frequencies
/// `|ξ| ≤ max_freq`.
#[derive(Debug, Clone)]
pub struct Evaluator<'a, T: Real> {
    body: &'a ConvexBody<T>,
    kind: Kind,
    mode: Mode<T>,
    mass: T,
}

impl<'a, T: Real> Evaluator<'a, T> {
    pub fn new(body: &'a ConvexBody<T>, kind: Kind, max_freq: T, method: Method) -> Result<Self> {
        let d = body.dim();
        let closed_box = match body.shape() {
            Shape::Box(h) if method == Method::Auto => Some(h.clone()),
            _ => None,
        };
        let mode = if let Some(h) = closed_box {
            Mode::Box(h)
        } else if d != 2 {
            return Err(Error::Capability(format!(
                "Fourier transforms in dimension {d} are available for boxes only (closed form)"
            )));
        } else if body.outline().is_some() && method == Method::Auto {
            Mode::Polygon
        } else {
            let boundary = body.boundary()?;
            Mode::Rule(BoundaryRule::new(&boundary, body.diameter(), max_freq.abs(), method.refine()))
        };
        let mass = match (kind, body.shape()) {
            (Kind::Body, _) => body.volume()?,
            (Kind::Surface, Shape::Box(h)) if d != 2 => (0..d)
                .map(|i| {
                    h.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .fold(T::lit(2.0), |p, (_, v)| p * (*v + *v))
                })
                .sum(),
            (Kind::Surface, _) => body.perimeter()?,
        };
        Ok(Self { body, kind, mode, mass })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Number of boundary nodes (zero for closed forms).
    pub fn nodes(&self) -> usize {
        match &self.mode {
            Mode::Rule(r) => r.len(),
            _ => 0,
        }
    }

    /// Transform at `ξ`. The value is real because the body is symmetric.
    pub fn eval(&self, xi: &[T]) -> T {
        debug_assert_eq!(xi.len(), self.body.dim());
        if xi.iter().all(|v| *v == T::zero()) {
            return self.mass;
        }
        match &self.mode {
            Mode::Box(h) => box_closed(h, xi, self.kind),
            Mode::Polygon => {
                let poly = self.body.outline().expect("polygon mode needs an outline");
                polygon_closed(poly, [xi[0], xi[1]], self.kind)
            }
            Mode::Rule(rule) => match self.kind {
                Kind::Surface => rule.surface([xi[0], xi[1]]),
                Kind::Body => rule.body([xi[0], xi[1]]),
            },
        }
    }
}

fn check_dim<T: Real>(body: &ConvexBody<T>, d: usize) -> Result<()> {
    if d != body.dim() {
        return Err(Error::Argument(format!(
            "frequency has dimension {d}, body has dimension {}",
            body.dim()
        )));
    }
    Ok(())
}

/// `σ̂_K(ξ)` or `χ̂_K(ξ)`.
pub fn transform<T: Real>(
    body: &ConvexBody<T>,
    xi: &Frequency<T>,
    kind: Kind,
    method: Method,
) -> Result<Complex<T>> {
    check_dim(body, xi.dim())?;
    let ev = Evaluator::new(body, kind, xi.radius(), method)?;
    Ok(Complex::new(ev.eval(xi.coords()), T::zero()))
}

/// `σ̂_K(ξ) = ∫_{∂K} e^{−2πi x·ξ} ds(x)`.
pub fn surface_ft<T: Real>(body: &ConvexBody<T>, xi: &Frequency<T>) -> Result<Complex<T>> {
    transform(body, xi, Kind::Surface, Method::Auto)
}

/// `χ̂_K(ξ) = ∫_K e^{−2πi x·ξ} dx`.
pub fn body_ft<T: Real>(body: &ConvexBody<T>, xi: &Frequency<T>) -> Result<Complex<T>> {
    transform(body, xi, Kind::Body, Method::Auto)
}

/// Transform of the indicator of `A_{R,δ}`: `F(R+δ) − F(R)` with
/// `F(s) = s² χ̂_K(sξ)`. Both terms share one quadrature rule.
pub fn annulus_ft<T: Real>(
    body: &ConvexBody<T>,
    a: &AnnulusSpec<T>,
    xi: &Frequency<T>,
) -> Result<Complex<T>> {
    if body.dim() != 2 {
        return Err(Error::Capability("annulus transforms are planar".into()));
    }
    check_dim(body, xi.dim())?;
    let outer = a.radius() + a.width();
    let ev = Evaluator::new(body, Kind::Body, xi.radius() * outer, Method::Auto)?;
    let w = xi.coords();
    let f = |s: T| s * s * ev.eval(&[w[0] * s, w[1] * s]);
    Ok(Complex::new(f(outer) - f(a.radius()), T::zero()))
}

/// Transform along the ray `R·ω`, `R ∈ [r_min, r_max]`, on a grid of step
/// `1/(32·S(ω))`: sixteen samples per oscillation of `|σ̂|`.
pub fn ray_samples<T: Real>(
    body: &ConvexBody<T>,
    kind: Kind,
    dir: &Direction<T>,
    r_min: T,
    r_max: T,
) -> Result<Vec<(T, T)>> {
    check_dim(body, dir.dim())?;
    if !(r_min > T::zero() && r_max > r_min && r_max.is_finite()) {
        return Err(Error::Argument(format!("need 0 < r_min < r_max, got [{r_min}, {r_max}]")));
    }
    let step = (T::lit(32.0) * body.support(dir)).recip();
    let count = ceil_usize((r_max - r_min) / step) + 1;
    let grid: Vec<T> = (0..count)
        .map(|k| (r_min + step * T::lit(k as f64)).min(r_max))
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut start = 0;
    while start < grid.len() {
        // one rule per octave, sized for the top of the octave
        let top = grid[start] + grid[start];
        let end = grid.partition_point(|r| *r < top).max(start + 1);
        let ev = Evaluator::new(body, kind, grid[end - 1], Method::Auto)?;
        let w = dir.coords();
        let chunk: Vec<(T, T)> = grid[start..end]
            .par_iter()
            .map(|r| {
                let xi: Vec<T> = w.iter().map(|c| *c * *r).collect();
                (*r, ev.eval(&xi))
            })
            .collect();
        out.extend(chunk);
        start = end;
    }
    Ok(out)
}

/// Envelope of `|transform|` along a ray: the largest sample in each of
/// `windows_per_octave` geometric windows per octave. Only complete windows
/// inside `[r_min, r_max)` are kept.
pub fn pointwise_envelope<T: Real>(
    body: &ConvexBody<T>,
    kind: Kind,
    dir: &Direction<T>,
    r_min: T,
    r_max: T,
    windows_per_octave: usize,
) -> Result<Vec<(T, T)>> {
    let samples = ray_samples(body, kind, dir, r_min, r_max)?;
    Ok(ray_envelope(&samples, r_min, r_max, windows_per_octave))
}

/// Envelope of precomputed ray samples, with the windowing of
/// [`pointwise_envelope`].
pub fn ray_envelope<T: Real>(samples: &[(T, T)], r_min: T, r_max: T, windows_per_octave: usize) -> Vec<(T, T)> {
    let w = windows_per_octave.max(1) as f64;
    let windows = ((r_max / r_min).to_f64_lossy().log2() * w + 1e-9).floor();
    let end = r_min * T::lit(2f64.powf(windows / w));
    let kept: Vec<(T, T)> = samples
        .iter()
        .filter(|(r, _)| *r < end)
        .map(|(r, v)| (*r, v.abs()))
        .collect();
    super::envelope_maxima(&kept, windows_per_octave)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn zero_frequency_gives_mass() {
        let zero = Frequency::new(vec![0.0, 0.0]).unwrap();
        let disk = ConvexBody::<f64>::disk();
        assert!(close(surface_ft(&disk, &zero).unwrap().re, 2.0 * PI, 1e-13));
        let sq = ConvexBody::<f64>::square();
        assert_eq!(body_ft(&sq, &zero).unwrap().re, 4.0);
        assert_eq!(surface_ft(&sq, &zero).unwrap().re, 8.0);
    }

    #[test]
    fn square_closed_forms() {
        let sq = ConvexBody::<f64>::square();
        for r in [1.0, 2.0, 7.0] {
            let v = surface_ft(&sq, &Frequency::planar(r, 0.0)).unwrap();
            assert!(close(v.re, 4.0, 1e-12), "{r}: {v}");
        }
        let v = body_ft(&sq, &Frequency::new(vec![0.25, 0.0]).unwrap()).unwrap();
        assert!(close(v.re, 8.0 / PI, 1e-14));
    }

    #[test]
    fn polygon_closed_form_matches_quadrature() {
        let sq = ConvexBody::<f64>::square();
        let hex = ConvexBody::<f64>::random_symmetric_polygon(3, 7).unwrap();
        for body in [&sq, &hex] {
            for (r, th) in [(0.3, 0.1), (5.0, 1.0), (40.0, 2.2)] {
                let xi = Frequency::planar(r, th);
                for kind in [Kind::Surface, Kind::Body] {
                    let a = transform(body, &xi, kind, Method::Auto).unwrap().re;
                    let b = transform(body, &xi, kind, Method::Quadrature { refine: 1 }).unwrap().re;
                    assert!((a - b).abs() < 1e-10, "{kind:?} r={r}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn box_matches_square_polygon() {
        let b = ConvexBody::<f64>::cuboid(vec![1.0, 0.5]).unwrap();
        let p = ConvexBody::<f64>::polygon_from_half(&[[1.0, -0.5], [1.0, 0.5]]).unwrap();
        for (r, th) in [(0.7, 0.3), (3.0, 2.0)] {
            let xi = Frequency::planar(r, th);
            for kind in [Kind::Surface, Kind::Body] {
                let a = transform(&b, &xi, kind, Method::Auto).unwrap().re;
                let c = transform(&p, &xi, kind, Method::Auto).unwrap().re;
                assert!((a - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn three_dimensional_capabilities() {
        let cube = ConvexBody::<f64>::cuboid(vec![1.0, 1.0, 1.0]).unwrap();
        let xi = Frequency::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(surface_ft(&cube, &xi).unwrap().re, 24.0);
        let ball = ConvexBody::<f64>::ellipsoid(vec![1.0; 3]).unwrap();
        assert!(matches!(body_ft(&ball, &xi), Err(Error::Capability(_))));
        assert!(matches!(
            annulus_ft(&cube, &AnnulusSpec::new(1.0, 0.1).unwrap(), &xi),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn annulus_at_zero_is_area() {
        let disk = ConvexBody::<f64>::disk();
        let a = AnnulusSpec::new(1.0, 0.1).unwrap();
        let v = annulus_ft(&disk, &a, &Frequency::new(vec![0.0, 0.0]).unwrap()).unwrap();
        assert!(close(v.re, 0.21 * PI, 1e-13));
    }

    #[test]
    fn smooth_rules_agree() {
        let e = ConvexBody::<f64>::ellipsoid(vec![2.0, 1.0]).unwrap();
        let xi = Frequency::planar(10.0, 0.4);
        let a = transform(&e, &xi, Kind::Surface, Method::Auto).unwrap().re;
        let b = transform(&e, &xi, Kind::Surface, Method::Quadrature { refine: 3 }).unwrap().re;
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        let l3 = ConvexBody::<f64>::lp_ball(2, 3.0).unwrap();
        let a = transform(&l3, &xi, Kind::Body, Method::Auto).unwrap().re;
        let b = transform(&l3, &xi, Kind::Body, Method::Quadrature { refine: 2 }).unwrap().re;
        assert!((a - b).abs() < 1e-9);
    }
}
