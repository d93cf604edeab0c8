use serde::{Deserialize, Serialize};

use super::IntervalUnion;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Largest number of cells or digit differences enumerated.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Points of `[0, 1]` whose base-`2m` digits are even, truncated at `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorSpec {
    pub m: u32,
    pub depth: u32,
}

impl CantorSpec {
    pub fn new(m: u32, depth: u32) -> Result<Self> {
        let spec = Self { m, depth };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.depth < 1 {
            return Err(Error::Argument(format!(
                "need m ≥ 2 and depth ≥ 1, got m = {}, depth = {}",
                self.m, self.depth
            )));
        }
        let cells = (self.m as u64).checked_pow(self.depth);
        if cells.map_or(true, |c| c > ENUMERATION_CAP) {
            return Err(Error::Limit(format!(
                "{}^{} cells exceed {ENUMERATION_CAP}",
                self.m, self.depth
            )));
        }
        Ok(())
    }

    /// `2m`.
    pub fn base(&self) -> i128 {
        2 * self.m as i128
    }

    /// `(2m)^depth`, the common denominator of every endpoint.
    pub fn denominator(&self) -> i128 {
        self.base().pow(self.depth)
    }

    /// `m^depth`.
    pub fn cells(&self) -> u64 {
        (self.m as u64).pow(self.depth)
    }

    /// The even digits `0, 2, …, 2m − 2`.
    pub fn digits(&self) -> impl Iterator<Item = i128> {
        (0..self.m as i128).map(|k| 2 * k)
    }

    /// Left endpoints of the depth-`n` cells as numerators over
    /// [`CantorSpec::denominator`], increasing.
    pub(crate) fn left_numerators(&self) -> Vec<i128> {
        let mut lefts = vec![0i128];
        for _ in 0..self.depth {
            lefts = lefts
                .iter()
                .flat_map(|l| self.digits().map(move |d| l * self.base() + d))
                .collect();
        }
        lefts
    }
}

/// Depth-`n` iterate: `m^n` intervals of length `(2m)^{−n}`.
pub fn cantor_build(spec: &CantorSpec) -> Result<IntervalUnion<Rational>> {
    spec.validate()?;
    let den = spec.denominator();
    Ok(IntervalUnion::from_sorted(
        spec.left_numerators()
            .into_iter()
            .map(|l| (Rational::new(l, den), Rational::new(l + 1, den)))
            .collect(),
    ))
}

/// Cover of `{|x − y| : x, y ∈ C_n}` built from digit differences.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceCover {
    /// Merged cover of the absolute differences.
    pub union: IntervalUnion<Rational>,
    /// `(2m − 1)^n` signed difference intervals before merging.
    pub pre_merge_count: u64,
    /// `2·(2m − 1)^n·(2m)^{−n}`, summed over the signed intervals.
    pub pre_merge_length: Rational,
}

/// Two depth-`n` cells with left endpoints `a`, `b` have differences
/// filling `[a − b − (2m)^{−n}, a − b + (2m)^{−n}]`, and `a − b` ranges over
/// the sums `Σ e_k (2m)^{−k}` with even `e_k ∈ [−(2m − 2), 2m − 2]`.
pub fn difference_cover(spec: &CantorSpec) -> Result<DifferenceCover> {
    spec.validate()?;
    let per_digit = 2 * spec.m as u64 - 1;
    let count = per_digit
        .checked_pow(spec.depth)
        .filter(|c| *c <= ENUMERATION_CAP)
        .ok_or_else(|| Error::Limit(format!("{per_digit}^{} digit differences exceed {ENUMERATION_CAP}", spec.depth)))?;
    let top = 2 * spec.m as i128 - 2;
    let mut centers = vec![0i128];
    for _ in 0..spec.depth {
        centers = centers
            .iter()
            .flat_map(|c| (-top..=top).step_by(2).map(move |e| c * spec.base() + e))
            .collect();
    }
    debug_assert_eq!(centers.len() as u64, count);
    let den = spec.denominator();
    let mut folded: Vec<(i128, i128)> = centers
        .iter()
        .map(|c| {
            let a = c.abs();
            ((a - 1).max(0), a + 1)
        })
        .collect();
    folded.sort_unstable();
    let mut merged: Vec<(i128, i128)> = Vec::new();
    for (a, b) in folded {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let union = IntervalUnion::from_sorted(
        merged
            .into_iter()
            .map(|(a, b)| (Rational::new(a, den), Rational::new(b, den)))
            .collect(),
    );
    Ok(DifferenceCover {
        union,
        pre_merge_count: count,
        pre_merge_length: Rational::new(2 * count as i128, den),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn first_iterates() {
        let c = cantor_build(&CantorSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!(c.intervals(), &[(ratio(0, 1), ratio(1, 4)), (ratio(1, 2), ratio(3, 4))]);
        let c = cantor_build(&CantorSpec::new(2, 8).unwrap()).unwrap();
        assert_eq!(c.len(), 256);
        assert_eq!(c.total_length(), ratio(1, 256));
        let c = cantor_build(&CantorSpec::new(3, 2).unwrap()).unwrap();
        assert_eq!(c.len(), 9);
        assert!(c.intervals().iter().all(|(a, b)| *b - *a == ratio(1, 36)));
    }

    #[test]
    fn iterates_are_nested() {
        for n in 1..6 {
            let outer = cantor_build(&CantorSpec::new(2, n).unwrap()).unwrap();
            let inner = cantor_build(&CantorSpec::new(2, n + 1).unwrap()).unwrap();
            assert!(outer.contains_union(&inner));
        }
    }

    #[test]
    fn first_difference_cover() {
        let d = difference_cover(&CantorSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!(d.pre_merge_count, 3);
        assert_eq!(d.pre_merge_length, ratio(3, 2));
        // centres −1/2, 0, 1/2 with half-width 1/4 fold onto [0, 3/4]
        assert_eq!(d.union.intervals(), &[(ratio(0, 1), ratio(3, 4))]);
    }

    #[test]
    fn oversized_specs_are_refused() {
        assert!(matches!(CantorSpec::new(2, 30), Err(Error::Limit(_))));
        assert!(matches!(CantorSpec::new(1, 3), Err(Error::Argument(_))));
    }
}
