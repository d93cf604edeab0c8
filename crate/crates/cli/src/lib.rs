//! Command-line experiments: one TOML config per run, CSV tables, a JSON
//! report with verdicts, and an optional log-log SVG plot.

pub mod commands;
pub mod config;
pub mod report;
pub mod svg;

use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand};

use commands::RunContext;
use config::ScanConfig;
use report::Report;

/// Process exit code when every verdict passes.
pub const EXIT_PASS: i32 = 0;
/// Process exit code on errors (configuration, I/O, capability).
pub const EXIT_ERROR: i32 = 1;
/// Process exit code when a verdict fails its threshold.
pub const EXIT_THRESHOLD: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kdist", version, about = "Distance sets of convex norms: numerical experiments")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Overrides the `seed` of the configuration.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Geometry of a convex body.
    #[command(subcommand)]
    Body(BodyCmd),
    /// Fourier decay of surface or body measure.
    #[command(subcommand)]
    Decay(DecayCmd),
    /// Distinct-distance counts of point families.
    #[command(subcommand)]
    Distset(DistsetCmd),
    /// Cantor sets, difference covers, box counting and energies.
    #[command(subcommand)]
    Fractal(FractalCmd),
    /// Discrete-to-continuous conversion through diophantine cubes.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Numerical checks of the chord and annulus bounds.
    #[command(subcommand)]
    Lemma(LemmaCmd),
}

#[derive(Debug, Subcommand)]
pub enum BodyCmd {
    Inspect,
}

#[derive(Debug, Subcommand)]
pub enum DecayCmd {
    Scan,
}

#[derive(Debug, Subcommand)]
pub enum DistsetCmd {
    Scan,
}

#[derive(Debug, Subcommand)]
pub enum FractalCmd {
    Build,
}

#[derive(Debug, Subcommand)]
pub enum ConvertCmd {
    Demo,
}

#[derive(Debug, Subcommand)]
pub enum LemmaCmd {
    Check,
}

/// Runs one subcommand and returns its report (already written to disk).
pub fn run(cli: &Cli) -> Result<Report> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring --threads")?;
    }
    let path = cli.global.config.as_deref().context("missing --config <path>")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = ScanConfig::parse(&text).with_context(|| format!("in {}", path.display()))?;
    let ctx = RunContext {
        seed: cli.global.seed.unwrap_or(config.seed),
        echo: ScanConfig::echo(&text)?,
        config,
        out: cli.global.out.clone(),
    };
    match cli.command {
        Command::Body(BodyCmd::Inspect) => commands::body_inspect(&ctx),
        Command::Decay(DecayCmd::Scan) => commands::decay_scan(&ctx),
        Command::Distset(DistsetCmd::Scan) => commands::distset_scan(&ctx),
        Command::Fractal(FractalCmd::Build) => commands::fractal_build(&ctx),
        Command::Convert(ConvertCmd::Demo) => commands::convert_demo(&ctx),
        Command::Lemma(LemmaCmd::Check) => commands::lemma_check(&ctx),
    }
}

/// Exit code for the outcome of [`run`].
pub fn exit_code(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(r) if r.pass => EXIT_PASS,
        Ok(_) => EXIT_THRESHOLD,
        Err(_) => EXIT_ERROR,
    }
}
