//! `impartial`: generators, mechanisms and verifiers from the command line.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or malformed input, 3 enumeration cap exceeded.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use impartial::MechanismId;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "impartial",
    version,
    about = "Impartial selection mechanisms: evaluation and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (default: json; csv for figure3; plain graph text for gen).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Largest n evaluated exactly by the permutation-based mechanisms.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Seed for anything random; required whenever sampling.
    #[arg(long, global = true, env = "IMPARTIAL_SEED")]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GraphInput {
    /// Graph file in `n; t1,...,tn` form, or `-` for stdin. Lines starting with `#` are skipped.
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,

    /// Generate the graph instead, e.g. "family=cycle n=7".
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a graph from a family (`family=lb delta=2 nprime=3`), or a random one with --n and --seed.
    Gen {
        spec: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Selection probabilities of a mechanism on a graph (stdin unless --graph/--family).
    Eval {
        #[arg(value_name = "MECH", required_unless_present = "mech")]
        mechanism: Option<MechanismId>,
        #[arg(long, conflicts_with = "mechanism")]
        mech: Option<MechanismId>,
        #[command(flatten)]
        input: GraphInput,
        /// Exact evaluation (the default).
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        /// Draw this many samples instead.
        #[arg(long)]
        samples: Option<u64>,
    },
    #[command(subcommand)]
    Verify(Verify),
    /// Guarantee table for Δ = 2..=delta-max.
    Figure3 {
        #[arg(long, default_value_t = 15)]
        delta_max: usize,
    },
    /// Smallest ratio over every graph on n vertices, overall and per Δ.
    WorstCase {
        #[arg(long)]
        mech: MechanismId,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Single-vertex deviations never change the deviator's probability.
    Impartial {
        #[arg(long)]
        mech: MechanismId,
        #[arg(long)]
        n: usize,
        /// Check this many random graphs instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Every graph on n vertices meets the mechanism's guarantee.
    Bounds {
        #[arg(long)]
        mech: MechanismId,
        #[arg(long)]
        n: usize,
    },
    /// Left-indegree correlation on one graph (default: the 7-vertex example) or --count random graphs.
    Correlation {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long)]
        count: Option<u64>,
    },
    /// Identities and inequalities of the upper-bound argument for a symmetric exact mechanism.
    UbChain {
        #[arg(long)]
        mech: MechanismId,
        #[arg(long)]
        n: usize,
    },
    /// Permutation mechanism on the lower-bound family for growing n'.
    Tightness {
        #[arg(long, default_value_t = 2)]
        delta: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3])]
        nprime: Vec<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// The permutation mechanism always selects a vertex with maximum indegree from the left.
    Lemma3 {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        input: GraphInput,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
