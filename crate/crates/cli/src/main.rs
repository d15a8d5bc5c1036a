//! `orbitlab`: reproducible experiments over finite permutation groups,
//! the five injection categories, ages and the module lab.
//!
//! Exit codes: 0 success, 1 property violation, 2 malformed input,
//! 3 resource cap.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::Failure;

#[derive(Debug, Parser)]
#[command(name = "orbitlab", version = orbitlab::VERSION, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
    Text,
}

/// Flags shared by every subcommand; each subcommand reads the ones it
/// needs and rejects missing mandatory ones as malformed input.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct Options {
    /// Group file (`N=<degree>` header, one generator per line).
    #[arg(long, global = true)]
    pub group: Option<PathBuf>,
    /// Group file for the subgroup H.
    #[arg(long, global = true)]
    pub subgroup: Option<PathBuf>,
    /// Group file for the subgroup K of `fullness-witness`.
    #[arg(long = "k-group", global = true)]
    pub k_group: Option<PathBuf>,
    /// Category kind (fi, oi, bi, ci, si); `sap` and `amalgamate` also
    /// accept `pair`.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long = "max-n", global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[arg(long, global = true)]
    pub width: Option<usize>,
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// `q` or `fp:P`.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// `lex` or `grevlex`.
    #[arg(long, global = true, default_value = "grevlex")]
    pub order: String,
    /// Output format; defaults to tsv for `growth`, text for `sap` and
    /// `amalgamate`, json otherwise.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Element file for `noeth-chain`.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// List `kind([m], [n])`.
    Homset,
    /// Factor a morphism `KIND m->n : [..]`, or all of `kind([m], [n])`.
    Factorize { morphism: Option<String> },
    /// Growth profile f, F, F_star up to `--max-n`.
    Growth,
    /// Lemma check on shared orbits of G and H at `--n`.
    SameOrbits,
    /// t-density of H in G with t = `--n`.
    Dense,
    /// Non-fullness witness for restriction from G to H, built on G/K.
    FullnessWitness,
    /// Amalgamate the spans given by two embedding files.
    Amalgamate {
        left: PathBuf,
        right: PathBuf,
        /// Allow amalgams larger than the set pushout.
        #[arg(long)]
        weak: bool,
    },
    /// Strong amalgamation property up to `--cap` points.
    Sap,
    /// Orbit category versus embedding category up to `--cap` points.
    Orbitcat,
    /// Chain experiment from `--input`, or a built-in example chain.
    NoethChain {
        /// Built-in chain: `oi` or `fi`.
        #[arg(long)]
        example: Option<String>,
    },
    /// Restriction decomposition of `P_n` at width `--width`.
    RestrictCheck,
}

impl Command {
    fn default_format(&self) -> Format {
        match self {
            Command::Growth => Format::Tsv,
            Command::Sap | Command::Amalgamate { .. } => Format::Text,
            _ => Format::Json,
        }
    }
}

/// Everything that determines an invocation's output.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub subcommand: Command,
    #[serde(flatten)]
    pub options: Options,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut options = cli.options;
    options.format.get_or_insert(cli.command.default_format());
    let config = ExperimentConfig {
        subcommand: cli.command,
        options,
    };
    let (output, code) = match commands::run(&config) {
        Ok(out) => {
            let code = if out.violated { 1 } else { 0 };
            (out.text, code)
        }
        Err(failure) => {
            eprintln!("orbitlab: {failure}");
            let code = match failure {
                Failure::Malformed(_) => 2,
                Failure::Core(e) => report::exit_code(&e),
            };
            (String::new(), code)
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(output.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
