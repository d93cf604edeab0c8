use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::stats::fit_line;

/// Minimum number of positive samples accepted by [`decay_fit`].
pub const MIN_SAMPLES: usize = 8;
/// Minimum spread `R_max/R_min` (three octaves).
pub const MIN_SPREAD: f64 = 8.0;

/// Power-law fit `value ≈ C·(ln R)^k·R^{−γ}` of decay samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayProfile {
    /// `(R, value)`, sorted by `R`, values positive.
    pub samples: Vec<(f64, f64)>,
    pub gamma: f64,
    pub c: f64,
    /// RMS of the log-log regression.
    pub residual: f64,
    /// Fixed log-power exponent `k`, when enabled.
    pub log_power: Option<f64>,
    /// Non-positive samples discarded before fitting.
    pub dropped: usize,
}

impl DecayProfile {
    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    /// Fitted model at `R`.
    pub fn predict(&self, r: f64) -> f64 {
        let log = self.log_power.map_or(1.0, |k| r.ln().powf(k));
        self.c * log * r.powf(-self.gamma)
    }
}

/// Least-squares fit of `ln v − k ln ln R ≈ ln C − γ ln R`.
///
/// Zero and negative values are dropped and counted; at least eight positive
/// samples spanning three octaves must remain. With a log correction every
/// `R` must exceed 1.
pub fn decay_fit(samples: &[(f64, f64)], log_power: Option<f64>) -> Result<DecayProfile> {
    let mut kept: Vec<(f64, f64)> = samples.iter().copied().filter(|(_, v)| *v > 0.0).collect();
    let dropped = samples.len() - kept.len();
    if kept.iter().any(|(r, v)| !(r.is_finite() && *r > 0.0 && v.is_finite())) {
        return Err(Error::Argument("decay samples need finite R > 0 and finite values".into()));
    }
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    if kept.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Argument("decay samples must have distinct R".into()));
    }
    if kept.len() < MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} positive samples ({dropped} dropped), need {MIN_SAMPLES}",
            kept.len()
        )));
    }
    let spread = kept[kept.len() - 1].0 / kept[0].0;
    if spread < MIN_SPREAD {
        return Err(Error::InsufficientData(format!(
            "samples span a factor {spread:.3} in R, need {MIN_SPREAD}"
        )));
    }
    if log_power.is_some() && kept[0].0 <= 1.0 {
        return Err(Error::Argument("log correction needs R > 1".into()));
    }
    let xs: Vec<f64> = kept.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = kept
        .iter()
        .map(|(r, v)| v.ln() - log_power.map_or(0.0, |k| k * r.ln().ln()))
        .collect();
    let line = fit_line(&xs, &ys).ok_or_else(|| Error::InsufficientData("degenerate R values".into()))?;
    Ok(DecayProfile {
        samples: kept,
        gamma: -line.slope,
        c: line.intercept.exp(),
        residual: line.residual,
        log_power,
        dropped,
    })
}

/// Largest sample in each geometric window `[R₀·2^{j/w}, R₀·2^{(j+1)/w})`,
/// `R₀` the smallest sample radius. Empty windows are skipped.
pub fn envelope_maxima<T: Real>(samples: &[(T, T)], windows_per_octave: usize) -> Vec<(T, T)> {
    let w = windows_per_octave.max(1) as f64;
    let Some(r0) = samples.iter().map(|(r, _)| r.to_f64_lossy()).reduce(f64::min) else {
        return Vec::new();
    };
    let mut best: Vec<(usize, T, T)> = Vec::new();
    for (r, v) in samples {
        let j = ((r.to_f64_lossy() / r0).log2() * w + 1e-9).floor() as usize;
        match best.iter_mut().find(|(k, _, _)| *k == j) {
            Some(slot) if *v > slot.2 => *slot = (j, *r, *v),
            Some(_) => {}
            None => best.push((j, *r, *v)),
        }
    }
    best.sort_by_key(|(j, _, _)| *j);
    best.into_iter().map(|(_, r, v)| (r, v)).collect()
}
