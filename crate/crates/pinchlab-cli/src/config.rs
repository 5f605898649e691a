//! Command-line surface and the JSON config file it merges with.
//!
//! Every numeric option is optional on the command line; unset options fall
//! back to the config file (`--config`), then to the built-in defaults.
//! Flags always win over file values.

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "pinchlab",
    about = "Numerical laboratory for curvature-pinched mean curvature flow",
    version
)]
pub struct Cli {
    /// Suppress the timestamp header so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub reproducible: bool,
    /// Base seed for the randomized suites (fallback: PINCHLAB_SEED, then 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output prefix; artifacts land at <out>.csv / .summary.json /
    /// .violations.json.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// JSON config file supplying defaults for unset flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of the planarity constants over a dimension range.
    Constants(ConstantsArgs),
    /// Randomized identity/inequality suites with seeded sampling.
    Verify(VerifyArgs),
    /// Invariants of the closed-form solution families.
    Exact(ExactArgs),
    /// Reduced flow scenarios with per-step estimate monitors.
    Flow(FlowArgs),
    /// Scalar comparison ODEs (rigidity bound, logistic bound).
    Ode(OdeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants(_) => "constants",
            Command::Verify(_) => "verify",
            Command::Exact(_) => "exact",
            Command::Flow(_) => "flow",
            Command::Ode(_) => "ode",
        }
    }
}

#[derive(Debug, Args, Clone)]
pub struct ConstantsArgs {
    /// Inclusive dimension range, e.g. 2..30.
    #[arg(long, value_parser = parse_range)]
    pub n_range: Option<(usize, usize)>,
    /// Pinching gap eps0.
    #[arg(long)]
    pub eps0: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct VerifyArgs {
    /// all | appendixA | appendixB1 | appendixB2 | simons.
    #[arg(long)]
    pub suite: Option<String>,
    /// Samples per dimension pair.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct ExactArgs {
    /// cylinder | sphere | product.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_parser = parse_range)]
    pub n_range: Option<(usize, usize)>,
    #[arg(long, value_parser = parse_range)]
    pub k_range: Option<(usize, usize)>,
    /// Weight/evaluation time (t < 0).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Pinching constant for f; defaults to c_n per row.
    #[arg(long)]
    pub c0: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct FlowArgs {
    /// cylinder | perturbed-cylinder | sphere | product.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    /// Initial radius (profile families) or first factor radius.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Second factor radius (product family).
    #[arg(long)]
    pub b0: Option<f64>,
    /// Perturbation amplitude (perturbed-cylinder).
    #[arg(long)]
    pub amp: Option<f64>,
    /// Periodic cell length (profile families).
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub grid_m: Option<usize>,
    /// Step-size cap; the driver also respects the diffusion bound.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub snapshots: Option<usize>,
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Convexity threshold eps.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Pinching ratio bound L (|A| <= L H).
    #[arg(long)]
    pub big_l: Option<f64>,
    /// Entropy bound Lambda for the weighted-area check.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct OdeArgs {
    /// rigidity | logistic.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub j0: Option<f64>,
    #[arg(long)]
    pub f0: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
}

/// Flat JSON config; any subset of the flags, snake_case keys.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub reproducible: Option<bool>,
    pub n_range: Option<String>,
    pub k_range: Option<String>,
    pub eps0: Option<f64>,
    pub suite: Option<String>,
    pub samples: Option<usize>,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub r0: Option<f64>,
    pub b0: Option<f64>,
    pub amp: Option<f64>,
    pub length: Option<f64>,
    pub grid_m: Option<usize>,
    pub dt: Option<f64>,
    pub t0: Option<f64>,
    pub t1: Option<f64>,
    pub t: Option<f64>,
    pub c0: Option<f64>,
    pub snapshots: Option<usize>,
    pub eps: Option<f64>,
    pub big_l: Option<f64>,
    pub lambda: Option<f64>,
    pub kind: Option<String>,
    pub c1: Option<f64>,
    pub j0: Option<f64>,
    pub f0: Option<f64>,
}

/// Everything resolved before a command runs.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub seed: u64,
    pub out_prefix: PathBuf,
    pub reproducible: bool,
    pub command_name: String,
    pub file: FileConfig,
}

impl RunContext {
    pub fn resolve(cli: &Cli) -> anyhow::Result<Self> {
        let file: FileConfig = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let command_name = cli.command.name().to_string();
        if let Some(cmd) = &file.command {
            if cmd != &command_name {
                bail!("config file is for command '{cmd}', invoked '{command_name}'");
            }
        }
        let seed = cli
            .seed
            .or(file.seed)
            .or_else(|| {
                std::env::var("PINCHLAB_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(0);
        let out_prefix = cli
            .out
            .clone()
            .or_else(|| file.out.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(format!("pinchlab-{command_name}")));
        let reproducible = cli.reproducible || file.reproducible.unwrap_or(false);
        Ok(Self {
            seed,
            out_prefix,
            reproducible,
            command_name,
            file,
        })
    }
}

/// Parses `a..b` as an inclusive range.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected RANGE as a..b, got '{s}'"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad range end: {e}"))?;
    if hi < lo {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}
