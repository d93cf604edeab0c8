use super::IntervalUnion;
use crate::body::ConvexBody;
use crate::distset::{distance_set, Mode, PointSet};
use crate::error::{Error, Result};

/// Cubes of half-side `q^{−d/s}` around the points `p/q`, `p ∈ S ∩ [0, q]^d`,
/// inside `[0, 1]^d`.
#[derive(Debug, Clone)]
pub struct DioSpec {
    pub source: PointSet<f64>,
    pub q: u64,
    pub s: f64,
}

impl DioSpec {
    pub fn new(source: PointSet<f64>, q: u64, s: f64) -> Result<Self> {
        let d = source.dim() as f64;
        if q == 0 {
            return Err(Error::Argument("q must be at least 1".into()));
        }
        if !(s > 0.0 && s <= d) {
            return Err(Error::Range(format!("s must lie in (0, {d}], got {s}")));
        }
        Ok(Self { source, q, s })
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// `q^{−d/s}`.
    pub fn half_side(&self) -> f64 {
        (self.q as f64).powf(-(self.dim() as f64) / self.s)
    }

    /// `S ∩ [0, q]^d`, and whether every source point was kept.
    fn generators(&self) -> Result<(PointSet<f64>, bool)> {
        let q = self.q as f64;
        let tol = 1e-9 * q;
        let inside = |p: &[f64]| p.iter().all(|v| *v >= -tol && *v <= q + tol);
        if self.source.iter().all(inside) {
            return Ok((self.source.clone(), true));
        }
        let kept: Vec<Vec<f64>> = self.source.iter().filter(|p| inside(p)).map(|p| p.to_vec()).collect();
        if kept.is_empty() {
            return Err(Error::Argument(format!("no source point lies in [0, {q}]^d")));
        }
        Ok((PointSet::explicit(kept)?, false))
    }
}

/// A finite stage `E_q` of the diophantine construction.
#[derive(Debug, Clone)]
pub struct DioSet {
    pub dim: usize,
    pub half_side: f64,
    /// Cube centres `p/q`.
    pub centers: Vec<Vec<f64>>,
    /// `q^{−d/s} < 1/(2q)`: cubes around distinct lattice points are disjoint.
    pub disjoint: bool,
    /// Centres form the full grid `{0, 1/q, …, 1}^d`, so the set is the
    /// product of its axis projections.
    pub product: bool,
}

impl DioSet {
    pub fn cube_count(&self) -> usize {
        self.centers.len()
    }

    /// Projection onto axis `j`, clipped to `[0, 1]`.
    pub fn axis_union(&self, j: usize) -> Result<IntervalUnion<f64>> {
        if j >= self.dim {
            return Err(Error::Argument(format!("axis {j} out of range for dimension {}", self.dim)));
        }
        let r = self.half_side;
        let u = IntervalUnion::new(self.centers.iter().map(|c| (c[j] - r, c[j] + r)).collect())?;
        Ok(u.clip(0.0, 1.0))
    }

    /// Lebesgue measure, available for product stages.
    pub fn volume(&self) -> Option<f64> {
        self.product
            .then(|| (0..self.dim).map(|j| self.axis_union(j).map(|u| u.total_length()).unwrap_or(0.0)).product())
    }
}

/// Builds the stage `E_q`. Overlapping cubes are allowed; `disjoint`
/// reports whether they are separated.
pub fn dio_build(spec: &DioSpec) -> Result<DioSet> {
    let (gens, all) = spec.generators()?;
    let q = spec.q as f64;
    let product = all && matches!(gens.provenance(), crate::distset::Provenance::Lattice { q } if *q == spec.q);
    let half_side = spec.half_side();
    Ok(DioSet {
        dim: spec.dim(),
        half_side,
        centers: gens.iter().map(|p| p.iter().map(|v| v / q).collect()).collect(),
        disjoint: half_side < 1.0 / (2.0 * q),
        product,
    })
}

/// Cover of `Δ_K(E_q)` by one interval per distance of `S_q`, scaled by `1/q`.
#[derive(Debug, Clone)]
pub struct DeltaCover {
    /// `#Δ_K(S_q)`.
    pub count: usize,
    /// Centres `v/q`, increasing.
    pub centers: Vec<f64>,
    /// `2·q^{−d/s}·max_{ε ∈ {±1}^d} ||ε||_K`.
    pub half_width: f64,
    /// Sum of the unmerged interval lengths.
    pub pre_merge_length: f64,
    pub union: IntervalUnion<f64>,
}

/// For `x`, `y` in the cubes around `p/q`, `p'/q` the difference is
/// `(p − p')/q + w` with `|w|_∞ ≤ 2q^{−d/s}`, so `||x − y||_K` lies within
/// `2q^{−d/s}·max ||ε||_K` of `||p − p'||_K/q`.
pub fn delta_cover(spec: &DioSpec, body: &ConvexBody<f64>, mode: Mode) -> Result<DeltaCover> {
    let (gens, _) = spec.generators()?;
    let d = spec.dim();
    if d > 20 {
        return Err(Error::Capability("corner enumeration limited to d ≤ 20".into()));
    }
    let corner_norm = (0u32..1 << d)
        .map(|bits| {
            let e: Vec<f64> = (0..d).map(|i| if bits >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
            body.gauge(&e)
        })
        .fold(0.0, f64::max);
    let ds = distance_set(&gens, body, mode)?;
    let q = spec.q as f64;
    let half_width = 2.0 * spec.half_side() * corner_norm;
    let centers: Vec<f64> = ds.values.iter().map(|v| v / q).collect();
    let union = IntervalUnion::from_sorted(centers.iter().map(|c| ((c - half_width).max(0.0), c + half_width)).collect());
    Ok(DeltaCover {
        count: ds.count(),
        pre_merge_length: 2.0 * half_width * ds.count() as f64,
        centers,
        half_width,
        union,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(q: u64) -> PointSet<f64> {
        PointSet::lattice(2, q).unwrap()
    }

    #[test]
    fn lattice_stage() {
        let e = dio_build(&DioSpec::new(lattice(4), 4, 1.0).unwrap()).unwrap();
        assert_eq!(e.cube_count(), 25);
        assert_eq!(e.half_side, 1.0 / 16.0);
        assert!(e.disjoint && e.product);
        let axis = e.axis_union(0).unwrap();
        assert_eq!(axis.len(), 5);
        assert!((axis.total_length() - (3.0 * 0.125 + 2.0 * 0.0625)).abs() < 1e-15);
    }

    #[test]
    fn overlapping_cubes_merge() {
        let e = dio_build(&DioSpec::new(lattice(4), 4, 2.0).unwrap()).unwrap();
        assert_eq!(e.half_side, 0.25);
        assert!(!e.disjoint);
        assert_eq!(e.axis_union(1).unwrap().intervals(), &[(0.0, 1.0)]);
        assert_eq!(e.volume(), Some(1.0));
    }

    #[test]
    fn rotated_generators() {
        let s = PointSet::<f64>::rotated(9, 0.3).unwrap();
        let inside = s.iter().filter(|p| p.iter().all(|v| (-1e-9..=9.0 + 1e-9).contains(v))).count();
        let e = dio_build(&DioSpec::new(s, 9, 1.0).unwrap()).unwrap();
        assert_eq!(e.cube_count(), inside);
        assert!(!e.product);
    }

    #[test]
    fn linf_cover() {
        let spec = DioSpec::new(lattice(16), 16, 1.0).unwrap();
        let c = delta_cover(&spec, &ConvexBody::square(), Mode::ExactRational).unwrap();
        assert_eq!(c.count, 16);
        assert!((c.pre_merge_length - 0.25).abs() < 1e-15);
        assert!(c.union.total_length() <= c.pre_merge_length);
        assert!(DioSpec::new(lattice(4), 4, 2.5).is_err());
    }
}
