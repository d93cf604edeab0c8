//! Planar boundary curves for line integrals over `∂K`.

use super::Polygon;
use crate::quadrature::composite;
use crate::scalar::Real;

/// Smooth closed curve `φ ↦ x(φ)`, `φ ∈ [0, 2π)`, counterclockwise, with
/// `x(φ + π) = −x(φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothCurve<T> {
    kind: CurveKind<T>,
    max_speed: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum CurveKind<T> {
    Ellipse { a: T, b: T },
    /// Unit sphere of `l^p`, parametrised by polar angle.
    Superellipse { p: T },
}

impl<T: Real> SmoothCurve<T> {
    pub fn ellipse(a: T, b: T) -> Self {
        Self {
            kind: CurveKind::Ellipse { a, b },
            max_speed: a.max(b),
        }
    }

    pub fn superellipse(p: T) -> Self {
        let mut c = Self {
            kind: CurveKind::Superellipse { p },
            max_speed: T::one(),
        };
        let n = 4096;
        let tau = T::lit(std::f64::consts::TAU);
        let vmax = (0..n)
            .map(|k| {
                let (_, d) = c.eval(tau * T::lit(k as f64) / T::lit(n as f64));
                d[0].hypot(d[1])
            })
            .fold(T::zero(), T::max);
        c.max_speed = vmax * T::lit(1.05);
        c
    }

    /// Point and tangent `(x(φ), x'(φ))`.
    #[inline]
    pub fn eval(&self, phi: T) -> ([T; 2], [T; 2]) {
        let (s, c) = phi.sin_cos();
        match self.kind {
            CurveKind::Ellipse { a, b } => ([a * c, b * s], [-a * s, b * c]),
            CurveKind::Superellipse { p } => {
                let (ac, as_) = (c.abs(), s.abs());
                let g = (ac.powf(p) + as_.powf(p)).powf(p.recip());
                let pm1 = p - T::one();
                let dg = g.powf(T::one() - p)
                    * (ac.powf(pm1) * c.signum() * (-s) + as_.powf(pm1) * s.signum() * c);
                let g2 = g * g;
                ([c / g, s / g], [-s / g - c * dg / g2, c / g - s * dg / g2])
            }
        }
    }

    /// Semi-axes when the curve is an ellipse.
    pub fn ellipse_axes(&self) -> Option<(T, T)> {
        match self.kind {
            CurveKind::Ellipse { a, b } => Some((a, b)),
            CurveKind::Superellipse { .. } => None,
        }
    }

    /// Upper bound on `|x'(φ)|`.
    pub fn max_speed(&self) -> T {
        self.max_speed
    }
}

/// Boundary of a planar body: straight edges or a smooth curve.
#[derive(Debug, Clone, Copy)]
pub enum PlanarBoundary<'a, T> {
    Polygon(&'a Polygon<T>),
    Smooth(SmoothCurve<T>),
}

const MEASURE_PANELS: usize = 1024;

impl<T: Real> PlanarBoundary<'_, T> {
    pub fn length(&self) -> T {
        match self {
            PlanarBoundary::Polygon(p) => p
                .edges()
                .map(|(a, b)| (b[0] - a[0]).hypot(b[1] - a[1]))
                .sum(),
            PlanarBoundary::Smooth(c) => {
                let tau = T::lit(std::f64::consts::TAU);
                composite(T::zero(), tau, MEASURE_PANELS, |phi| {
                    let (_, d) = c.eval(phi);
                    d[0].hypot(d[1])
                })
            }
        }
    }

    /// `½ ∮ (x dy − y dx)`.
    pub fn enclosed_area(&self) -> T {
        match self {
            PlanarBoundary::Polygon(p) => p.area(),
            PlanarBoundary::Smooth(c) => {
                let tau = T::lit(std::f64::consts::TAU);
                composite(T::zero(), tau, MEASURE_PANELS, |phi| {
                    let (x, d) = c.eval(phi);
                    x[0] * d[1] - x[1] * d[0]
                }) / T::lit(2.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superellipse_p2_is_circle() {
        let c = SmoothCurve::<f64>::superellipse(2.0);
        for k in 0..50 {
            let phi = k as f64 * 0.13;
            let (x, d) = c.eval(phi);
            assert!((x[0] - phi.cos()).abs() < 1e-14 && (x[1] - phi.sin()).abs() < 1e-14);
            assert!((d[0] + phi.sin()).abs() < 1e-13 && (d[1] - phi.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn superellipse_tangent_matches_finite_difference() {
        let c = SmoothCurve::<f64>::superellipse(3.0);
        let h = 1e-6;
        for k in 1..40 {
            let phi = k as f64 * 0.157 + 0.01;
            let (_, d) = c.eval(phi);
            let (xp, _) = c.eval(phi + h);
            let (xm, _) = c.eval(phi - h);
            for i in 0..2 {
                assert!(((xp[i] - xm[i]) / (2.0 * h) - d[i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn ellipse_area_and_symmetry() {
        let c = SmoothCurve::<f64>::ellipse(2.0, 1.0);
        let b = PlanarBoundary::Smooth(c);
        assert!((b.enclosed_area() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        let (x, _) = c.eval(0.7);
        let (y, _) = c.eval(0.7 + std::f64::consts::PI);
        assert!((x[0] + y[0]).abs() < 1e-15 && (x[1] + y[1]).abs() < 1e-15);
    }
}
