//! `finclass`: classifying spaces, classifying maps, pullbacks and bundle
//! enumeration for finite spaces, with JSON in and out.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "finclass", version, about = "Finite G-spaces, classifying spaces and principal bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Largest classifying space to build, in points.
    #[arg(long, global = true, default_value_t = finclass_core::classifying::DEFAULT_POINT_BUDGET)]
    pub budget_points: u64,
    /// Largest number of continuous maps to enumerate.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget_maps: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub workers: usize,
    /// Seed for randomized suites and shuffled covers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Build E_F^κG and verify its tube cover.
    BuildClassifying {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "representatives")]
        family: String,
        #[arg(long, default_value_t = 1)]
        kappa: usize,
        /// Include the space itself in the report.
        #[arg(long)]
        emit_space: bool,
    },
    /// Find an isovariant tube cover of a G-space and its classifying map.
    Classify {
        #[arg(long)]
        gspace: PathBuf,
        #[arg(long, default_value = "representatives")]
        family: String,
    },
    /// Pull back E along a map into B.
    Pullback {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        classifying: PathBuf,
    },
    /// Enumerate principal bundles over the face space of a cell complex.
    Enumerate {
        /// A complex file or one of vertex, interval, circle, polygonN, simplexN.
        #[arg(long)]
        complex: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        kappa: Option<usize>,
        /// Compare against the transition-data oracle.
        #[arg(long)]
        oracle: bool,
        /// Include each representative bundle in the report.
        #[arg(long)]
        emit_bundles: bool,
    },
    /// Check a theorem instance or its default suite.
    Verify {
        /// One of 1.4, 2.1, 2.7, 3.7.
        #[arg(long)]
        thm: String,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        gspace: Option<PathBuf>,
    },
    /// Reduce a partition of unity on [0,1] to a countable cover.
    ReduceCover {
        #[arg(long)]
        partition: PathBuf,
    },
    /// Run every invariant suite.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli);
    let text = serde_json::to_string_pretty(&outcome.report).expect("serializable report") + "\n";
    if let Some(msg) = &outcome.error {
        eprintln!("error: {msg}");
    }
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code)
}
