use crate::error::{Error, Result};
use crate::scalar::Field;

/// Finite union of closed intervals, kept sorted with overlapping or
/// touching pieces merged.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion<S> {
    intervals: Vec<(S, S)>,
    total_length: S,
}

impl<S: Field> IntervalUnion<S> {
    /// Normalises arbitrary closed intervals `[a, b]`, `a ≤ b`.
    pub fn new(mut intervals: Vec<(S, S)>) -> Result<Self> {
        if intervals.iter().any(|(a, b)| !(a <= b)) {
            return Err(Error::Argument("interval endpoints must satisfy a ≤ b".into()));
        }
        intervals.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("ordered endpoints"));
        Ok(Self::from_sorted(intervals))
    }

    /// Merges intervals already sorted by left endpoint.
    pub(crate) fn from_sorted(intervals: Vec<(S, S)>) -> Self {
        let mut merged: Vec<(S, S)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        let total_length = merged.iter().fold(S::zero(), |s, (a, b)| s + (*b - *a));
        Self {
            intervals: merged,
            total_length,
        }
    }

    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            total_length: S::zero(),
        }
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Sum of lengths, accumulated in `S`.
    pub fn total_length(&self) -> S {
        self.total_length
    }

    pub fn contains(&self, x: S) -> bool {
        let i = self.intervals.partition_point(|(a, _)| *a <= x);
        i > 0 && x <= self.intervals[i - 1].1
    }

    /// `other ⊂ self`.
    pub fn contains_union(&self, other: &Self) -> bool {
        other.intervals.iter().all(|(a, b)| {
            let i = self.intervals.partition_point(|(c, _)| *c <= *a);
            i > 0 && *b <= self.intervals[i - 1].1
        })
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        all.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("ordered endpoints"));
        Self::from_sorted(all)
    }

    /// Intersection with `[lo, hi]`.
    pub fn clip(&self, lo: S, hi: S) -> Self {
        let pieces = self
            .intervals
            .iter()
            .filter_map(|(a, b)| {
                let a = if *a < lo { lo } else { *a };
                let b = if *b > hi { hi } else { *b };
                (a <= b).then_some((a, b))
            })
            .collect();
        Self::from_sorted(pieces)
    }

    pub fn map<U: Field>(&self, f: impl Fn(S) -> U) -> IntervalUnion<U> {
        IntervalUnion::from_sorted(self.intervals.iter().map(|(a, b)| (f(*a), f(*b))).collect())
    }
}
