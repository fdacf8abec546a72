//! Command-line flags and their resolution into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use underspread_core::{ExtremesMode, LogUnit};

use crate::config::{parse_snr, Command, Domain, Format, Grid, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "underspread",
    version,
    about = "Capacity lower bounds for underspread fading channels"
)]
pub struct Cli {
    /// Re-run a configuration saved from an earlier JSON output (or a bare config object).
    #[arg(long, value_name = "FILE", global = true)]
    pub config: Option<PathBuf>,

    /// Write the result here instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Sample the prototype pulse or its ambiguity surface.
    Pulse(PulseArgs),
    /// First-order coefficients c_m and c_M, optionally the extremes for one spread.
    Coeffs(CoeffsArgs),
    /// Evaluate the lower bound at one SNR or over an SNR grid.
    Bound(BoundArgs),
    /// SNR interval where the bound stays above a fraction of AWGN capacity.
    Interval(IntervalArgs),
    /// Interval endpoints over spread x leakage grids.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Lattice density TF, 1 < TF < 2.
    #[arg(long = "tf", default_value_t = 1.02)]
    pub tf_product: f64,

    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Unit for rates.
    #[arg(long, value_enum, default_value = "nats")]
    pub units: UnitArg,

    /// How m_g and M_g are obtained.
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum UnitArg {
    Nats,
    Bits,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Taylor,
    Exact,
    Auto,
}

#[derive(Debug, Args)]
pub struct PulseArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "time")]
    pub domain: Domain,
    /// Samples (per axis for the surface).
    #[arg(long)]
    pub points: Option<usize>,
    /// Half-width of the sampled range in s or Hz; default ten periods or the band edge.
    #[arg(long)]
    pub span: Option<f64>,
    /// Spread Δ of the surface rectangle.
    #[arg(long, default_value_t = 1e-4)]
    pub spread: f64,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also report m_g and M_g for this spread.
    #[arg(long)]
    pub spread: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub common: Common,
    /// Spread Δ = 4 ν₀ τ₀.
    #[arg(long)]
    pub spread: f64,
    /// Scattering-function leakage ε outside the rectangle.
    #[arg(long)]
    pub eps: f64,
    /// SNR, linear (100) or in dB (20dB).
    #[arg(long, value_parser = parse_snr, allow_hyphen_values = true)]
    pub snr: Option<f64>,
    /// SNR grid start:stop:lin|log:count; ends accept the dB suffix.
    #[arg(long, value_parser = Grid::parse_snr, allow_hyphen_values = true)]
    pub snr_range: Option<Grid>,
    /// Bandwidth in Hz.
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth: f64,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub spread: f64,
    #[arg(long)]
    pub eps: f64,
    /// Required fraction of AWGN capacity.
    #[arg(long, default_value_t = 0.75)]
    pub threshold: f64,
    /// Endpoint resolution in dB.
    #[arg(long, default_value_t = 1e-3)]
    pub tol_db: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Spread grid start:stop:lin|log:count.
    #[arg(long, default_value = "1e-7:1e-4:log:7")]
    pub spread_grid: Grid,
    /// Leakage grid start:stop:lin|log:count.
    #[arg(long, default_value = "1e-7:1e-4:log:7")]
    pub eps_grid: Grid,
    #[arg(long, default_value_t = 0.75)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_db: f64,
}

fn base(command: Command, c: &Common, default_format: Format) -> RunConfig {
    RunConfig {
        command,
        tf_product: c.tf_product,
        spread: None,
        eps: None,
        snr: None,
        snr_range: None,
        bandwidth: None,
        threshold: None,
        tol_db: None,
        spread_grid: None,
        eps_grid: None,
        domain: None,
        points: None,
        span: None,
        format: c.format.unwrap_or(default_format),
        units: match c.units {
            UnitArg::Nats => LogUnit::Nats,
            UnitArg::Bits => LogUnit::Bits,
        },
        mode: match c.mode {
            ModeArg::Taylor => ExtremesMode::Taylor,
            ModeArg::Exact => ExtremesMode::Exact,
            ModeArg::Auto => ExtremesMode::Auto,
        },
    }
}

impl Sub {
    /// Fills in every default so the config alone reproduces the run.
    pub fn resolve(&self) -> RunConfig {
        match self {
            Sub::Pulse(a) => {
                let points = a.points.unwrap_or(if a.domain == Domain::Surface { 33 } else { 401 });
                RunConfig {
                    domain: Some(a.domain),
                    points: Some(points),
                    span: (a.domain != Domain::Surface).then_some(a.span).flatten(),
                    spread: (a.domain == Domain::Surface).then_some(a.spread),
                    ..base(Command::Pulse, &a.common, Format::Csv)
                }
            }
            Sub::Coeffs(a) => RunConfig {
                spread: a.spread,
                ..base(Command::Coeffs, &a.common, Format::Json)
            },
            Sub::Bound(a) => RunConfig {
                spread: Some(a.spread),
                eps: Some(a.eps),
                snr: a.snr,
                snr_range: a.snr_range,
                bandwidth: Some(a.bandwidth),
                ..base(Command::Bound, &a.common, Format::Json)
            },
            Sub::Interval(a) => RunConfig {
                spread: Some(a.spread),
                eps: Some(a.eps),
                threshold: Some(a.threshold),
                tol_db: Some(a.tol_db),
                ..base(Command::Interval, &a.common, Format::Json)
            },
            Sub::Sweep(a) => RunConfig {
                spread_grid: Some(a.spread_grid),
                eps_grid: Some(a.eps_grid),
                threshold: Some(a.threshold),
                tol_db: Some(a.tol_db),
                ..base(Command::Sweep, &a.common, Format::Csv)
            },
        }
    }
}
