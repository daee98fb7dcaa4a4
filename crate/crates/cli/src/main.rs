//! `uc-indicator`: integral-indicator analytics for basic vs competency mode.
//!
//! Exit status: 0 success, 1 domain error (the message names the violated
//! invariant), 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use indicator_core::{DerivationRule, ReportFormat, Warmup, WindowConfig};

#[derive(Parser, Debug)]
#[command(name = "uc-indicator", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct WindowArgs {
    /// Lag window length k (periods).
    #[arg(long = "window", value_name = "K", default_value_t = indicator_core::indicator::DEFAULT_WINDOW)]
    k: usize,
    /// Standardize each window column before the Gram product (Pearson variant).
    #[arg(long)]
    standardize: bool,
    /// Early-period policy.
    #[arg(long, value_name = "skip|shrink", default_value = "skip")]
    warmup: Warmup,
}

impl WindowArgs {
    fn config(&self) -> indicator_core::Result<WindowConfig> {
        Ok(WindowConfig::new(self.k)?
            .standardized(self.standardize)
            .with_warmup(self.warmup))
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_name = "table|csv", default_value = "table")]
    format: ReportFormat,
    /// Write the document here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Add a generation timestamp to the metadata block.
    #[arg(long)]
    stamp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-period indicators V_i(t) and the integral V for one series.
    Indicator {
        series: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare basic and competency modes; the competency series is either
    /// given or derived from a compliance matrix.
    Compare {
        basic: PathBuf,
        competency: Option<PathBuf>,
        /// Compliance matrix CSV used to derive the competency series.
        #[arg(long, value_name = "PATH", conflicts_with = "competency")]
        compliance: Option<PathBuf>,
        #[arg(long, value_name = "mask|weight", default_value = "mask")]
        derive: DerivationRule,
        /// Also write t,basic,competency plot data here.
        #[arg(long, value_name = "PATH")]
        plot_data: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate basic.csv, competency.csv, scenario.json and metadata.txt.
    Simulate {
        /// Scenario JSON; the built-in demo scenario when omitted.
        #[arg(long, value_name = "PATH")]
        scenario: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run a scenario through the full pipeline and print the comparison report.
    Report {
        #[arg(long, value_name = "PATH")]
        scenario: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        #[arg(long, value_name = "PATH")]
        plot_data: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the resource constraint C(V) <= C for a compliance matrix.
    CheckBudget {
        #[arg(long, value_name = "PATH")]
        compliance: PathBuf,
        /// Budget limit C (thousand rubles).
        #[arg(long, value_name = "C")]
        budget: f64,
        /// Per-competency costs, `competency_id,cost`.
        #[arg(
            long,
            value_name = "PATH",
            conflicts_with = "cost_each",
            required_unless_present = "cost_each"
        )]
        costs: Option<PathBuf>,
        /// Same activation cost for every competency.
        #[arg(long, value_name = "X")]
        cost_each: Option<f64>,
    },
    /// Verify the shipped two-mode fixture against its published totals.
    FixtureVerify {
        /// Alternative `t,basic,competency[,delta]` table.
        #[arg(long, value_name = "PATH")]
        fixture: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
