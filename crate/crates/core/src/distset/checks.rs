use std::collections::HashMap;

use super::PointSet;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of [`well_distributed_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct WellDistributed<T> {
    pub ok: bool,
    /// Lower corner of an empty cube, when one exists.
    pub witness: Option<Vec<T>>,
    /// Number of cubes examined.
    pub cubes: usize,
}

/// Outcome of [`separated_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct Separation<T> {
    pub ok: bool,
    /// Smallest Euclidean distance between two distinct points
    /// (`+∞` for fewer than two points).
    pub min_distance: T,
    pub pair: Option<(usize, usize)>,
}

type Cells = HashMap<Vec<i64>, Vec<usize>>;

fn bucket<T: Real>(s: &PointSet<T>, origin: &[T], size: T) -> Cells {
    let mut cells: Cells = HashMap::new();
    for (i, p) in s.iter().enumerate() {
        let key = p
            .iter()
            .zip(origin)
            .map(|(v, o)| ((*v - *o) / size).floor().to_f64_lossy() as i64)
            .collect();
        cells.entry(key).or_default().push(i);
    }
    cells
}

/// Visits every offset in `{from, …, to}^d`.
fn for_each_offset(dim: usize, from: i64, to: i64, mut f: impl FnMut(&[i64])) {
    let mut off = vec![from; dim];
    loop {
        f(&off);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if off[i] < to {
                off[i] += 1;
                break;
            }
            off[i] = from;
        }
    }
}

/// Checks that every closed axis-parallel cube of side `c` whose lower
/// corner lies on the `(c/2)`-grid anchored at the bounding box minimum, and
/// which fits inside the bounding box, contains a point.
pub fn well_distributed_check<T: Real>(s: &PointSet<T>, c: T) -> Result<WellDistributed<T>> {
    if !(c > T::zero() && c.is_finite()) {
        return Err(Error::Argument(format!("cube side must be positive, got {c}")));
    }
    if s.is_empty() {
        return Ok(WellDistributed { ok: false, witness: None, cubes: 0 });
    }
    let d = s.dim();
    let mut lo = vec![T::infinity(); d];
    let mut hi = vec![T::neg_infinity(); d];
    for p in s.iter() {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let step = c / T::lit(2.0);
    let cells = bucket(s, &lo, step);
    // corners lo + k·step with lo + k·step + c ≤ hi
    let counts: Vec<i64> = (0..d)
        .map(|i| ((hi[i] - lo[i] - c) / step + T::lit(1e-9)).floor().to_f64_lossy() as i64 + 1)
        .collect();
    if counts.iter().any(|n| *n <= 0) {
        return Ok(WellDistributed { ok: true, witness: None, cubes: 0 });
    }
    let mut k = vec![0i64; d];
    let mut cubes = 0;
    loop {
        cubes += 1;
        let corner: Vec<T> = (0..d).map(|i| lo[i] + step * T::lit(k[i] as f64)).collect();
        let mut found = false;
        // one extra cell on each side absorbs rounding in the cell index
        for_each_offset(d, -1, 3, |off| {
            if found {
                return;
            }
            let key: Vec<i64> = k.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(idx) = cells.get(&key) {
                found = idx.iter().any(|&j| {
                    s.point(j)
                        .iter()
                        .zip(&corner)
                        .all(|(v, a)| *v >= *a && *v <= *a + c)
                });
            }
        });
        if !found {
            return Ok(WellDistributed { ok: false, witness: Some(corner), cubes });
        }
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(WellDistributed { ok: true, witness: None, cubes });
            }
            i -= 1;
            if k[i] + 1 < counts[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
        }
    }
}

fn closest_pair<T: Real>(s: &PointSet<T>, size: T) -> Option<(T, usize, usize)> {
    let origin = vec![T::zero(); s.dim()];
    let cells = bucket(s, &origin, size);
    let mut keys: Vec<&Vec<i64>> = cells.keys().collect();
    keys.sort();
    let mut best: Option<(T, usize, usize)> = None;
    for key in keys {
        let here = &cells[key];
        for_each_offset(s.dim(), -1, 1, |off| {
            let other: Vec<i64> = key.iter().zip(off).map(|(a, b)| a + b).collect();
            let Some(there) = cells.get(&other) else { return };
            for &i in here {
                for &j in there {
                    if j <= i {
                        continue;
                    }
                    let d2: T = s
                        .point(i)
                        .iter()
                        .zip(s.point(j))
                        .map(|(a, b)| (*a - *b) * (*a - *b))
                        .sum();
                    let d = d2.sqrt();
                    if best.map_or(true, |(b, bi, bj)| d < b || (d == b && (i, j) < (bi, bj))) {
                        best = Some((d, i, j));
                    }
                }
            }
        });
    }
    best
}

/// Checks `|a − a'| ≥ c` for all distinct points using a hash grid of cell
/// size `c`, and reports the exact minimum distance. When no pair is closer
/// than the cell size the grid is rebuilt at the best distance found, which
/// brings every closer pair into neighbouring cells.
pub fn separated_check<T: Real>(s: &PointSet<T>, c: T) -> Result<Separation<T>> {
    if !(c > T::zero() && c.is_finite()) {
        return Err(Error::Argument(format!("separation must be positive, got {c}")));
    }
    if s.len() < 2 {
        return Ok(Separation { ok: true, min_distance: T::infinity(), pair: None });
    }
    let mut size = c;
    let found = loop {
        match closest_pair(s, size) {
            Some(b) if b.0 <= size => break b,
            Some(b) => size = b.0,
            None => size = size + size,
        }
    };
    Ok(Separation {
        ok: found.0 >= c,
        min_distance: found.0,
        pair: Some((found.1, found.2)),
    })
}
