use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "gqd", version, about = "Global quantum discord calculations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default, Clone)]
pub struct GlobalArgs {
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Seed for the optimizer and for random test states.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "GQD_THREADS")]
    pub threads: Option<usize>,
    /// Step of the μ sweep (werner-ghz) or the Δ sweep (at-scan).
    #[arg(long, global = true)]
    pub grid_step: Option<f64>,
    /// Number of refined starting points in basis minimisation.
    #[arg(long, global = true)]
    pub multistarts: Option<usize>,
    /// TOML file with defaults for the global flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GQD of the three-qubit GHZ state on the (θ₂, θ₃) measurement surface.
    GhzSurface {
        /// Points per angle; θ_k = kπ/resolution.
        #[arg(long, default_value_t = 129)]
        resolution: usize,
    },
    /// GQD of the Werner-GHZ family across μ ∈ [0, 1].
    WernerGhz {
        #[arg(long, value_enum, default_value_t = WernerMode::Both)]
        mode: WernerMode,
    },
    /// GQD of a spin group of the Ashkin-Teller chain across Δ.
    AtScan {
        /// Number of sites M (2M spins).
        #[arg(long, default_value_t = 3)]
        sites: usize,
        #[arg(long, value_enum, default_value_t = GroupArg::Quartet)]
        group: GroupArg,
        #[arg(long, default_value_t = 0)]
        anchor: usize,
        #[arg(long, value_enum, default_value_t = ScanStrategy::FixedX)]
        strategy: ScanStrategy,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        beta: f64,
        /// Lower end of the Δ sweep (default 0.2).
        #[arg(long, allow_negative_numbers = true)]
        delta_min: Option<f64>,
        /// Upper end of the Δ sweep (default 1.8).
        #[arg(long, allow_negative_numbers = true)]
        delta_max: Option<f64>,
        /// Use the iterative eigensolver, allowing up to 8 sites.
        #[arg(long)]
        iterative: bool,
    },
    /// Correlation measures of a named state.
    Discord {
        /// bell | werner(μ) | ghz(n) | werner-ghz(μ) | at-pair(M,Δ,same-site|neighbor-sigma)
        state: String,
        /// Strategy used for the GQD row.
        #[arg(long, value_enum, default_value_t = StrategyArg::Minimize)]
        strategy: StrategyArg,
    },
    /// Property suites on seeded random states; exit code 4 on any failure.
    Selftest {
        /// Cases per suite.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WernerMode {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Quartet,
    Sextet,
    Octet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanStrategy {
    FixedZ,
    FixedX,
    ReducedEigenbasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    FixedZ,
    FixedX,
    ReducedEigenbasis,
    Minimize,
}
