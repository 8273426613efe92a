use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "thc", version, about = "Linear stability and transition type of thermohaline convection in a spherical shell")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime, transition number with its interaction terms, and thresholds.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eigenvalues of one (l, n) block.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scan of the spectrum checking exchange of stabilities.
    Pes {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 50)]
        lmax: u32,
        #[arg(long, default_value_t = 50)]
        nmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce the reference tables with computed values and errors.
    Tables {
        /// Single table 1-4; all when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        table: Option<u8>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Transition number along a grid of Rayleigh numbers on the critical surface.
    Qsweep {
        #[command(flatten)]
        shell: ShellArgs,
        #[arg(long)]
        rmin: f64,
        #[arg(long)]
        rmax: f64,
        #[arg(long, default_value_t = 31)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate the reduced amplitude equations.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        /// Relative offset of σ above σ_c.
        #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
        sigma_offset: f64,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial |x|²; defaults to a tenth of the attractor radius.
        #[arg(long)]
        x0_norm_sq: Option<f64>,
        /// Keep every n-th step in the trajectory.
        #[arg(long, default_value_t = 10)]
        stride: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare triple-product quadrature with closed-form Gaunt coefficients.
    HarmonicsCheck {
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ShellArgs {
    #[arg(long)]
    pub le: f64,
    #[arg(long, default_value_t = 7.5)]
    pub pr: f64,
    /// Aspect ratio; overrides --lc.
    #[arg(long = "r")]
    pub aspect: Option<f64>,
    /// Preset aspect ratio: 1 gives r = 2/π, 2 gives r = 2√3/π.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub lc: Option<u32>,
    /// Sign of bottom minus top salinity, +1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub sign: i32,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[command(flatten)]
    pub shell: ShellArgs,
    /// Thermal Rayleigh number.
    #[arg(long = "R", allow_hyphen_values = true)]
    pub rayleigh: f64,
    /// Saline Rayleigh number; defaults to the critical surface value.
    #[arg(long, allow_hyphen_values = true)]
    pub rtilde: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
