//! Run configuration, one TOML document per experiment.
//!
//! ```toml
//! seed = 7
//! [body]
//! kind = "disk"
//! [decay]
//! r_min = 8.0
//! r_max = 512.0
//! expected_gamma = 0.5
//! ```
//!
//! Each subcommand reads its own table (`[decay]`, `[distset]`,
//! `[fractal]`, `[convert]`, `[lemma]`) plus `[body]` where a body is needed.

use anyhow::{bail, Context, Result};
use kdist::body::BodySpec;
use kdist::distset::{Classification, Family, Mode};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default)]
    pub seed: u64,
    /// Record the wall-clock time in the report (breaks byte-identity).
    #[serde(default)]
    pub timestamp: bool,
    #[serde(default = "yes")]
    pub plot: bool,
    pub body: Option<BodySpec>,
    pub decay: Option<DecayConfig>,
    pub distset: Option<DistsetConfig>,
    pub fractal: Option<FractalConfig>,
    pub convert: Option<ConvertConfig>,
    pub lemma: Option<LemmaConfig>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Surface,
    Body,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayConfig {
    #[serde(default = "surface")]
    pub measure: Measure,
    /// Exponent of the spherical average; absent for a single ray.
    pub average: Option<u32>,
    /// Ray direction in radians.
    #[serde(default)]
    pub angle: f64,
    #[serde(default = "r_min")]
    pub r_min: f64,
    #[serde(default = "r_max")]
    pub r_max: f64,
    #[serde(default = "two")]
    pub windows_per_octave: usize,
    pub log_power: Option<f64>,
    pub expected_gamma: Option<f64>,
    #[serde(default = "gamma_tolerance")]
    pub tolerance: f64,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
}

fn surface() -> Measure {
    Measure::Surface
}

fn r_min() -> f64 {
    8.0
}

fn r_max() -> f64 {
    512.0
}

fn two() -> usize {
    2
}

fn gamma_tolerance() -> f64 {
    0.05
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Lattice,
    Rotated,
    Perturbed,
}

/// Point family; a perturbed family without its own seed uses the run seed.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: FamilyKind,
    #[serde(default = "two")]
    pub dim: usize,
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub jitter: f64,
    pub seed: Option<u64>,
}

impl FamilyConfig {
    pub fn family(&self, run_seed: u64) -> Family {
        match self.kind {
            FamilyKind::Lattice => Family::Lattice { dim: self.dim },
            FamilyKind::Rotated => Family::Rotated { angle: self.angle },
            FamilyKind::Perturbed => Family::Perturbed {
                dim: self.dim,
                seed: self.seed.unwrap_or(run_seed),
                jitter: self.jitter,
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistsetConfig {
    pub family: FamilyConfig,
    pub q_list: Vec<u64>,
    #[serde(default = "float_tol")]
    pub mode: Mode,
    /// Dimension exponent of the Falconer-type hypothesis; the bound is `d/α`.
    #[serde(default = "alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub slack: f64,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub expect_class: Option<Classification>,
    /// Largest admissible minimal gap at the largest `q`.
    pub max_final_gap: Option<f64>,
    #[serde(default)]
    pub gaps_strictly_decreasing: bool,
}

fn float_tol() -> Mode {
    Mode::FloatTol
}

fn alpha() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Grow,
    Decay,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyConfig {
    pub gamma: f64,
    pub cutoffs: Vec<f64>,
    /// Depth of the product measure (cell centres).
    #[serde(default = "energy_depth")]
    pub depth: u32,
    /// Expected behaviour of consecutive increments.
    pub expect: Option<Trend>,
}

fn energy_depth() -> u32 {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractalConfig {
    #[serde(default = "m")]
    pub m: u32,
    pub depth: u32,
    #[serde(default = "product_dim")]
    pub product_dim: usize,
    /// Depth of the set whose box dimension is estimated (default `depth`).
    pub box_depth: Option<u32>,
    pub box_levels: Option<Vec<u32>>,
    pub box_dim_min: Option<f64>,
    pub box_dim_max: Option<f64>,
    pub max_cover_length: Option<f64>,
    #[serde(default)]
    pub energy: Vec<EnergyConfig>,
}

fn m() -> u32 {
    2
}

fn product_dim() -> usize {
    2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvertConfig {
    pub source: FamilyConfig,
    pub q_list: Vec<u64>,
    pub s: f64,
    #[serde(default = "float_tol")]
    pub mode: Mode,
    /// Largest admissible dimension bound `sβ/d`.
    pub max_dim_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    ChordRatio,
    Annulus,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaConfig {
    pub which: Lemma,
    #[serde(default = "t_min")]
    pub t_min: f64,
    #[serde(default = "t_max")]
    pub t_max: f64,
    #[serde(default = "t_per_octave")]
    pub t_per_octave: usize,
    #[serde(default = "angles")]
    pub angles: usize,
    /// Chord ratio: admissible max/median octave spread.
    #[serde(default = "max_factor")]
    pub max_spread: f64,
    /// Annulus: admissible change of the supremum under refinement.
    #[serde(default = "max_factor")]
    pub max_refinement_ratio: f64,
    pub expect_bounded: Option<bool>,
}

fn t_min() -> f64 {
    4.0
}

fn t_max() -> f64 {
    1024.0
}

fn t_per_octave() -> usize {
    64
}

fn angles() -> usize {
    32
}

fn max_factor() -> f64 {
    2.0
}

fn check_sorted<T: PartialOrd + std::fmt::Debug>(field: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        bail!("field `{field}`: grid must be nonempty");
    }
    if v.windows(2).any(|w| !(w[0] < w[1])) {
        bail!("field `{field}`: grid must be strictly increasing, got {v:?}");
    }
    Ok(())
}

impl ScanConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if let Some(d) = &self.distset {
            check_sorted("distset.q_list", &d.q_list)?;
        }
        if let Some(c) = &self.convert {
            check_sorted("convert.q_list", &c.q_list)?;
        }
        if let Some(f) = &self.fractal {
            if let Some(l) = &f.box_levels {
                check_sorted("fractal.box_levels", l)?;
            }
            for e in &f.energy {
                check_sorted("fractal.energy.cutoffs", &e.cutoffs)?;
            }
        }
        if let Some(d) = &self.decay {
            if !(d.r_min > 0.0 && d.r_max > d.r_min) {
                bail!("fields `decay.r_min`/`decay.r_max`: need 0 < r_min < r_max");
            }
        }
        Ok(())
    }

    /// The configuration as JSON with sorted keys, for the report echo.
    pub fn echo(text: &str) -> Result<serde_json::Value> {
        let value: toml::Value = toml::from_str(text)?;
        Ok(serde_json::to_value(value)?)
    }

    pub fn section<'a, T>(&self, name: &str, table: &'a Option<T>) -> Result<&'a T> {
        table
            .as_ref()
            .with_context(|| format!("configuration has no [{name}] table"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg = ScanConfig::parse(
            "seed = 3\n[body]\nkind = \"square\"\n[distset]\nq_list = [4, 8, 32]\nmode = \"exact_rational\"\n\
             [distset.family]\nkind = \"lattice\"\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        let d = cfg.distset.unwrap();
        assert_eq!(d.mode, Mode::ExactRational);
        assert_eq!(d.family.family(0), Family::Lattice { dim: 2 });
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = ScanConfig::parse("[body]\nkind = \"disk\"\nradius = 2\n").unwrap_err();
        assert!(format!("{err:#}").contains("radius"), "{err:#}");
        let err = ScanConfig::parse("[distset]\nq_list = [8, 4]\n[distset.family]\nkind = \"lattice\"\n").unwrap_err();
        assert!(format!("{err:#}").contains("distset.q_list"), "{err:#}");
    }

    #[test]
    fn echo_sorts_keys() {
        let v = ScanConfig::echo("b = 1\na = 2\n").unwrap();
        assert_eq!(v.to_string(), "{\"a\":2,\"b\":1}");
    }
}
