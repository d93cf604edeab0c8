use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{distance_set, Family, Mode};
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::fit_power_law;

/// Planar bodies whose counts grow slower than `q^POLYGON_BELOW` look polygonal.
pub const POLYGON_BELOW: f64 = 1.25;
/// Planar bodies whose counts grow faster than `q^CURVED_ABOVE` look curved.
pub const CURVED_ABOVE: f64 = 1.4;

/// Distinct-distance count of one window `S_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthPoint {
    pub q: u64,
    pub count: usize,
    pub min_gap: Option<f64>,
}

/// Counts `#Δ_K(S_q)` over a list of `q`, with the fitted exponent `β` in
/// `#Δ_K(S_q) ~ q^β` and the comparison against `d/α`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub dim: usize,
    pub points: Vec<GrowthPoint>,
    /// Smallest `q` used in the fit (the largest three octaves are fitted).
    pub fit_from: u64,
    pub beta: f64,
    pub residual: f64,
    pub alpha: f64,
    /// `d/α`.
    pub bound: f64,
    pub slack: f64,
    /// `β ≥ d/α − slack`.
    pub passes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    PolygonLike,
    CurvedLike,
    Inconclusive,
}

fn checked_q_list(q_list: &[u64]) -> Result<Vec<u64>> {
    let mut qs = q_list.to_vec();
    qs.sort_unstable();
    qs.dedup();
    match (qs.first(), qs.last()) {
        (Some(&lo), Some(&hi)) if lo >= 1 && hi >= 8 * lo => Ok(qs),
        _ => Err(Error::InsufficientData(format!(
            "q list must span at least 3 octaves (q_max ≥ 8·q_min), got {q_list:?}"
        ))),
    }
}

fn scan<T: Real>(family: &Family, body: &ConvexBody<T>, qs: &[u64], mode: Mode) -> Result<Vec<GrowthPoint>> {
    qs.iter()
        .map(|&q| {
            let s = family.build::<T>(q)?;
            let ds = distance_set(&s, body, mode)?;
            Ok(GrowthPoint {
                q,
                count: ds.count(),
                min_gap: ds.min_gap,
            })
        })
        .collect()
}

/// Fits `β` from the counts of a point family, using the `q ≥ q_max/8`.
pub fn growth_scan<T: Real>(
    family: &Family,
    body: &ConvexBody<T>,
    q_list: &[u64],
    mode: Mode,
    alpha: f64,
    slack: f64,
) -> Result<GrowthReport> {
    if !(alpha > 0.0 && alpha.is_finite()) || !(slack >= 0.0) {
        return Err(Error::Argument(format!("need α > 0 and slack ≥ 0, got α = {alpha}, slack = {slack}")));
    }
    let qs = checked_q_list(q_list)?;
    let points = scan(family, body, &qs, mode)?;
    let dim = family.dim();
    report_from_counts(dim, points, alpha, slack)
}

/// Builds a report from precomputed counts (same fitting rule as
/// [`growth_scan`]).
pub fn report_from_counts(dim: usize, points: Vec<GrowthPoint>, alpha: f64, slack: f64) -> Result<GrowthReport> {
    let qs: Vec<u64> = points.iter().map(|p| p.q).collect();
    checked_q_list(&qs)?;
    let q_max = *qs.iter().max().expect("nonempty");
    let fit_from = q_max.div_ceil(8);
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.q >= fit_from && p.count > 0)
        .map(|p| (p.q as f64, p.count as f64))
        .unzip();
    let fit = fit_power_law(&xs, &ys)
        .ok_or_else(|| Error::InsufficientData("need at least two nonzero counts in the fitted octaves".into()))?;
    let bound = dim as f64 / alpha;
    Ok(GrowthReport {
        dim,
        points,
        fit_from,
        beta: fit.slope,
        residual: fit.residual,
        alpha,
        bound,
        slack,
        passes: fit.slope >= bound - slack,
    })
}

/// Smallest gap between consecutive distinct distances, per `q`.
pub fn min_gap_trend<T: Real>(
    family: &Family,
    body: &ConvexBody<T>,
    q_list: &[u64],
    mode: Mode,
) -> Result<Vec<(u64, Option<f64>)>> {
    let qs = checked_q_list(q_list)?;
    Ok(scan(family, body, &qs, mode)?
        .into_iter()
        .map(|p| (p.q, p.min_gap))
        .collect())
}

/// Reads a planar growth exponent as polygon-like (`β < 1.25`),
/// curved-like (`β > 1.4`) or inconclusive.
pub fn polygonality_probe(report: &GrowthReport) -> Result<Classification> {
    if report.dim != 2 {
        return Err(Error::Capability(format!(
            "polygonality probe is planar, got dimension {}",
            report.dim
        )));
    }
    Ok(if report.beta < POLYGON_BELOW {
        Classification::PolygonLike
    } else if report.beta > CURVED_ABOVE {
        Classification::CurvedLike
    } else {
        Classification::Inconclusive
    })
}

/// Writes `q,count,min_gap` rows with a header; a missing gap is empty.
pub fn write_growth_csv<W: Write>(report: &GrowthReport, mut out: W) -> io::Result<()> {
    out.write_all(b"q,count,min_gap\n")?;
    for p in &report.points {
        match p.min_gap {
            Some(g) => writeln!(out, "{},{},{}", p.q, p.count, g)?,
            None => writeln!(out, "{},{},", p.q, p.count)?,
        }
    }
    Ok(())
}
