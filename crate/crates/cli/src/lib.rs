//! `kgon`: batch pipeline from contour files to bounds, features, fitted
//! models, predictions and cross-validation summaries.
//!
//! Every command is a pure function of its input files, flags and `--seed`.
//! Exit codes: 0 success, 2 input error, 3 numeric failure; failures print a
//! single `error: <input|numeric>: <reason>` line on stderr.

pub mod commands;
pub mod inputs;
pub mod tables;

use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("input: {0}")]
    Input(String),
    #[error("numeric: {0}")]
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    pub(crate) fn input_at(path: &Path, e: impl Display) -> Self {
        Failure::Input(format!("{}: {e}", path.display()))
    }

    /// The one-line report printed on stderr.
    pub fn report_line(&self) -> String {
        format!("error: {}", self.to_string().replace(['\n', '\r'], " "))
    }
}

#[derive(Debug, Parser)]
#[command(name = "kgon", version, about = "Lower bounds on contour sampling points, and models that predict them")]
pub struct Cli {
    /// Worker threads for batch work; 0 picks automatically, 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for synthetic data and cross-validation splits.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// Where contours come from.
#[derive(Debug, Clone, Args)]
pub struct Source {
    /// Contour file, directory of contour files, or manifest CSV
    /// (`contour_id,path,category`).
    #[arg(long, required_unless_present = "kimia", conflicts_with = "kimia")]
    pub input: Option<PathBuf>,
    /// Directory of externally supplied outline files (comma- or
    /// whitespace-separated coordinates); categories come from file names.
    #[arg(long, value_name = "DIR")]
    pub kimia: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Length,
    Distance,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    Arclength,
    Curvature,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Linear,
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CvMode {
    Split8020,
    Loco,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Circles, ellipses, squares, stars, stadiums and hand-like outlines.
    Shapes,
    /// 238 digitized outlines in 12 categories.
    Outline,
    /// Noisy blobs for studying the effect of smoothing.
    Jagged,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the moving-average smoother and write `<name><suffix>` files.
    Smooth {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4)]
        smooth_passes: usize,
        #[arg(long, default_value_t = 3)]
        smooth_window: usize,
        #[arg(long, default_value = "_smoothed")]
        suffix: String,
        /// Write here instead of next to each input.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Smallest k meeting the length and distance thresholds.
    Bounds {
        #[command(flatten)]
        source: Source,
        #[arg(long = "e", default_value_t = 0.005)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = CriterionArg::Both)]
        criterion: CriterionArg,
        #[arg(long, value_enum, default_value_t = ParamArg::Both)]
        param: ParamArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
        mode: ModeArg,
        /// Also write every error curve (k = 4..K) as CSV.
        #[arg(long)]
        curve_out: Option<PathBuf>,
        /// Stop error curves at this k instead of K.
        #[arg(long, requires = "curve_out", value_parser = clap::value_parser!(u64).range(4..))]
        curve_k_max: Option<u64>,
        /// Output CSV; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Total absolute curvature, length and curvature sign changes.
    Features {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Backward-selected OLS model for each bound.
    Fit {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value = "models.json")]
        out: PathBuf,
    },
    /// Predicted bounds from fitted models.
    Predict {
        #[arg(long)]
        models: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated 80:20 or leave-one-category-out cross-validation.
    Validate {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        bounds: PathBuf,
        /// CSV with `contour_id` and `category` columns.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = CvMode::Split8020)]
        mode: CvMode,
        #[arg(long, default_value_t = 10_000)]
        replicates: usize,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Re-run backward selection inside each replicate.
        #[arg(long)]
        reselect: bool,
        #[arg(long, default_value = "summary.json")]
        out: PathBuf,
        /// Also write every replicate RMSE as CSV.
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Write a seeded synthetic contour suite with a manifest.
    Synth {
        #[arg(long, value_enum, default_value_t = Suite::Shapes)]
        suite: Suite,
        /// Number of contours (jagged suite only).
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    commands::run(cli)
}
