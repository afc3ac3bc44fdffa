use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use fetal_doppler::{Problem, SegmentationConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Settings shared by every command. A JSON file with the same fields can be
/// passed with `--config`; flags given on the command line take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub segmentation: SegmentationConfig,
    pub problem: Option<Problem>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Flags accepted by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Color problem: blue (V/X signatures) or red (parallel lines).
    #[arg(long)]
    pub problem: Option<Problem>,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Smallest connected component kept, in pixels.
    #[arg(long = "min-area")]
    pub min_area: Option<usize>,
    /// Radius of the square opening applied to color masks.
    #[arg(long = "open-radius")]
    pub open_radius: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::data("config", format!("{}: {e}", path.display())))
    }

    /// Config file (if any) overlaid with explicit flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        if args.problem.is_some() {
            cfg.problem = args.problem;
        }
        for (slot, flag) in [
            (&mut cfg.input, &args.input),
            (&mut cfg.output, &args.output),
            (&mut cfg.model, &args.model),
            (&mut cfg.labels, &args.labels),
        ] {
            if flag.is_some() {
                *slot = flag.clone();
            }
        }
        if args.seed.is_some() {
            cfg.seed = args.seed;
        }
        if let Some(area) = args.min_area {
            cfg.segmentation.min_component_area = area;
        }
        if let Some(radius) = args.open_radius {
            cfg.segmentation.open_radius = radius;
        }
        cfg.segmentation.validate()?;
        Ok(cfg)
    }

    pub fn require_problem(&self) -> Result<Problem, CliError> {
        self.problem
            .ok_or_else(|| CliError::usage("--problem is required (blue or red)"))
    }
}

/// The value of a path setting, or a usage error naming its flag.
pub fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::usage(format!("--{flag} is required")))
}
