//! `freeharm`: batch computations on free groups, emitting CSV or JSON.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 a resource cap was hit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "freeharm", version, about = "Harmonic analysis on free groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Rank of the free group.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Auto,
    Sparse,
    Radial,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BatteryArg {
    All,
    Conv,
    Split,
    Rep,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convolution-power norm estimates u_n = |(f^* * f)^{*2n}|_q^{1/(4n)}.
    EstimateNorm {
        #[command(flatten)]
        common: Common,
        /// A sphere indicator, e.g. `chi1`.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        radial: Option<String>,
        /// JSON file with a sparse or radial function.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Largest n of the doubling schedule 1, 2, 4, ...
        #[arg(long, default_value_t = 256)]
        max_n: u64,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
    },
    /// Randomized batteries for the sphere convolution inequalities.
    VerifyLemmas {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Multiply every right-hand side by this factor before comparing.
        #[arg(long, default_value_t = 1.0)]
        rhs_scale: f64,
        #[arg(long, value_enum, default_value_t = BatteryArg::All)]
        battery: BatteryArg,
    },
    /// Gram-matrix positivity of φ_α (or a loaded function) on a ball.
    PdCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// JSON function to test instead of φ_α.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Radius of the ball used as base set.
        #[arg(long, alias = "radius", default_value_t = 2)]
        max_k: usize,
    },
    /// Summability conditions (2), (3), (4) for φ_α or a loaded radial profile.
    Conditions {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Radial JSON profile (zero past its coefficients) instead of φ_α.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        max_k: usize,
        /// Print the per-sphere table of one condition.
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        condition: Option<u8>,
    },
    /// The decay threshold (2d-1)^{-1/p}.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// A decay rate separating the ℓp and ℓq conditions, q < p.
    Separation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        /// Defaults to the midpoint of the witness interval.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 20)]
        max_k: usize,
    },
    /// Conjugates of a word on the spheres |w| + 2n against (2d-1)^{n-1}.
    TraceGrowth {
        #[command(flatten)]
        common: Common,
        /// Letters `a..z` / `A..Z` for generators / inverses, or signed
        /// indices such as `1,-2`.
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Hölder triple |φφ_αφ_β|_p ≤ |φφ_α|_q |φ_β|_r, single or randomized.
    Holder {
        #[command(flatten)]
        common: Common,
        /// Decay of the base profile φ = φ_γ.
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 0.9)]
        alpha: f64,
        #[arg(long, default_value_t = 0.7)]
        beta: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        /// Defaults to pq/(q-p).
        #[arg(long)]
        r: Option<f64>,
        /// Run the randomized battery with this many cases instead.
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("freeharm: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
