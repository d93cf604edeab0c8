use std::collections::HashSet;

use serde::Serialize;

use super::IntervalUnion;
use crate::distset::PointSet;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Real};
use crate::stats::fit_line;

/// Sets whose dyadic cell counts are available.
pub trait BoxCountable {
    fn ambient_dim(&self) -> usize;

    /// Number of cells `Π [k_i 2^{−L}, (k_i + 1) 2^{−L})` meeting the set.
    /// Intervals of positive length count the cells meeting their interior.
    fn cells(&self, level: u32) -> Result<u64>;
}

/// Counts cells of sorted disjoint intervals given their cell index ranges.
fn count_ranges(ranges: impl Iterator<Item = (i128, i128)>) -> u64 {
    let mut last: Option<i128> = None;
    let mut total = 0u64;
    for (lo, hi) in ranges {
        let lo = last.map_or(lo, |l| lo.max(l + 1));
        if hi >= lo {
            total += (hi - lo + 1) as u64;
            last = Some(hi);
        }
    }
    total
}

fn check_level(level: u32) -> Result<()> {
    if level > 60 {
        return Err(Error::Range(format!("dyadic level {level} above 60")));
    }
    Ok(())
}

impl BoxCountable for IntervalUnion<Rational> {
    fn ambient_dim(&self) -> usize {
        1
    }

    fn cells(&self, level: u32) -> Result<u64> {
        check_level(level)?;
        let scale = Rational::from_integer(1i128 << level);
        Ok(count_ranges(self.intervals().iter().map(|(a, b)| {
            let (sa, sb) = (*a * scale, *b * scale);
            if a == b {
                let k = sa.floor().to_integer();
                (k, k)
            } else {
                (sa.floor().to_integer(), sb.ceil().to_integer() - 1)
            }
        })))
    }
}

impl BoxCountable for IntervalUnion<f64> {
    fn ambient_dim(&self) -> usize {
        1
    }

    fn cells(&self, level: u32) -> Result<u64> {
        check_level(level)?;
        let scale = (level as f64).exp2();
        Ok(count_ranges(self.intervals().iter().map(|(a, b)| {
            let (sa, sb) = (a * scale, b * scale);
            if a == b {
                (sa.floor() as i128, sa.floor() as i128)
            } else {
                (sa.floor() as i128, sb.ceil() as i128 - 1)
            }
        })))
    }
}

/// Cartesian product of one-dimensional factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<B>(pub Vec<B>);

impl<B: BoxCountable> BoxCountable for Product<B> {
    fn ambient_dim(&self) -> usize {
        self.0.iter().map(|f| f.ambient_dim()).sum()
    }

    fn cells(&self, level: u32) -> Result<u64> {
        self.0.iter().try_fold(1u64, |acc, f| {
            acc.checked_mul(f.cells(level)?)
                .ok_or_else(|| Error::Limit("cell count overflows u64".into()))
        })
    }
}

impl<T: Real> BoxCountable for PointSet<T> {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn cells(&self, level: u32) -> Result<u64> {
        check_level(level)?;
        let scale = (level as f64).exp2();
        let cells: HashSet<Vec<i64>> = self
            .iter()
            .map(|p| p.iter().map(|v| (v.to_f64_lossy() * scale).floor() as i64).collect())
            .collect();
        Ok(cells.len() as u64)
    }
}

/// Least-squares box-counting slope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimension {
    pub estimate: f64,
    pub residual: f64,
    /// `(level, N(2^{−level}))`.
    pub counts: Vec<(u32, u64)>,
}

/// Slope of `log N(ε)` against `log(1/ε)` over `ε = 2^{−level}`.
pub fn box_dim<B: BoxCountable + ?Sized>(set: &B, levels: &[u32]) -> Result<BoxDimension> {
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    if levels.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "box counting needs at least 3 distinct scales, got {}",
            levels.len()
        )));
    }
    let counts = levels
        .iter()
        .map(|&l| Ok((l, set.cells(l)?)))
        .collect::<Result<Vec<_>>>()?;
    if counts.iter().any(|(_, n)| *n == 0) {
        return Err(Error::InsufficientData("empty set".into()));
    }
    let xs: Vec<f64> = counts.iter().map(|(l, _)| *l as f64 * std::f64::consts::LN_2).collect();
    let ys: Vec<f64> = counts.iter().map(|(_, n)| (*n as f64).ln()).collect();
    let fit = fit_line(&xs, &ys).ok_or_else(|| Error::InsufficientData("degenerate scales".into()))?;
    Ok(BoxDimension {
        estimate: fit.slope,
        residual: fit.residual,
        counts,
    })
}

/// Dyadic levels `step, 2·step, …` up to the resolution of a depth-`n`
/// base-`2m` construction.
pub fn levels_for_depth(m: u32, depth: u32) -> Vec<u32> {
    let bits = ((2 * m) as f64).log2() * depth as f64;
    let top = bits.floor() as u32;
    let step = if (2 * m).is_power_of_two() { (2 * m).trailing_zeros() } else { 1 };
    (1..=top).filter(|l| l % step == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{cantor_build, CantorSpec};
    use crate::scalar::ratio;

    #[test]
    fn unit_interval() {
        let u = IntervalUnion::new(vec![(ratio(0, 1), ratio(1, 1))]).unwrap();
        let d = box_dim(&u, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert!((d.estimate - 1.0).abs() < 1e-12);
        assert_eq!(d.counts[2], (3, 8));
    }

    #[test]
    fn cantor_quarter() {
        let spec = CantorSpec::new(2, 10).unwrap();
        let c = cantor_build(&spec).unwrap();
        let levels = levels_for_depth(2, 10);
        assert_eq!(levels, (1..=10).map(|k| 2 * k).collect::<Vec<_>>());
        let d = box_dim(&c, &levels).unwrap();
        assert!((d.estimate - 0.5).abs() < 1e-12);
        let p = Product(vec![c.clone(), c]);
        let d = box_dim(&p, &levels).unwrap();
        assert!((d.estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_cells() {
        let s = PointSet::<f64>::explicit(vec![vec![0.1, 0.1], vec![0.2, 0.1], vec![0.9, 0.9]]).unwrap();
        assert_eq!(s.cells(1).unwrap(), 2);
        assert_eq!(s.cells(3).unwrap(), 3);
        assert!(box_dim(&s, &[1, 2]).is_err());
    }
}
