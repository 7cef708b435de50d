//! `lifestyle`: calibrate membership functions, derive tag weights, validate
//! configuration and analyze a day from a visit log or a GPS trace.

mod commands;
mod config;
mod error;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lifestyle_core::{CategoryId, Quantity};

#[derive(Debug, Parser)]
#[command(
    name = "lifestyle",
    version,
    about = "Fuzzy lifestyle analysis and recommendations"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Csv,
}

/// Configuration files and overrides shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Tag catalog (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub catalog: Option<PathBuf>,

    /// Membership configuration (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub membership: Option<PathBuf>,

    /// Rule base (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub rules: Option<PathBuf>,

    /// POI database with home and work registration (JSON).
    #[arg(long = "poi-db", global = true, value_name = "FILE")]
    pub poi_db: Option<PathBuf>,

    /// Home-time fractions per category for trace input (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    pub allocation: Option<PathBuf>,

    /// Home-time intensity weights per category for trace input (JSON).
    #[arg(long = "home-weights", global = true, value_name = "FILE")]
    pub home_weights: Option<PathBuf>,

    /// Nearby-search service used for stays not in the POI database.
    #[arg(long = "nearby-url", global = true, value_name = "URL")]
    pub nearby_url: Option<String>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Hour (UTC) at which an analysis day starts.
    #[arg(long = "day-boundary", global = true, value_name = "HOUR")]
    pub day_boundary: Option<u32>,

    /// Minimum dwell of a stay point, minutes.
    #[arg(long = "dwell-min", global = true, value_name = "MIN")]
    pub dwell_min: Option<f64>,

    /// Stay-point distance threshold, meters.
    #[arg(long = "dist-m", global = true, value_name = "M")]
    pub dist_m: Option<f64>,

    /// POI search radius, meters.
    #[arg(long = "poi-radius-m", global = true, value_name = "M")]
    pub poi_radius_m: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a membership configuration from survey samples.
    Calibrate {
        samples: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Turn survey vote shares into a catalog fragment.
    Weights {
        votes: PathBuf,
        /// Category the surveyed tags belong to.
        #[arg(long)]
        category: CategoryId,
        /// Write the fragment here instead of stdout.
        #[arg(short, long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check every configuration file given.
    Validate,
    /// Analyze a day log (JSON) or a GPS trace (CSV).
    Analyze { input: PathBuf },
    /// Score the rule base against a category breakdown (JSON).
    Recommend { breakdown: PathBuf },
    /// Sample the membership functions of one variable.
    PlotMf {
        #[arg(long)]
        category: CategoryId,
        #[arg(long)]
        kind: Quantity,
        /// Number of evenly spaced sample points.
        #[arg(long, default_value_t = 101)]
        resolution: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    let result = match &cli.command {
        Command::Calibrate { samples, out } => commands::calibrate(cfg, samples, out),
        Command::Weights {
            votes,
            category,
            out,
        } => commands::weights(cfg, votes, *category, out.as_deref()),
        Command::Validate => commands::validate(cfg),
        Command::Analyze { input } => commands::analyze(cfg, input),
        Command::Recommend { breakdown } => commands::recommend(cfg, breakdown),
        Command::PlotMf {
            category,
            kind,
            resolution,
        } => commands::plot_mf(cfg, *category, *kind, *resolution),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
