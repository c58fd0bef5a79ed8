//! The `cstore` command line: storage rates of coset graphs, necessary
//! conditions, the reproduction table, spectra and erasure simulations.

mod commands;
mod output;
mod reproduce;
mod simulate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cstore::codes::CodeFamilyId;
use cstore::gf2::{Elimination, MemoryGate};

pub use commands::{CheckReport, EigenCount, SpectrumReport};
pub use output::Format;
pub use reproduce::{expected_table, ExpectedRow, ReproduceRow, ReproduceTable};
pub use simulate::{GraphSource, SimulationReport};

/// Environment variable that overrides `--mem-budget`.
pub const MEM_BUDGET_ENV: &str = "CSTORE_MEM_BUDGET";

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const CAPACITY: i32 = 3;
}

#[derive(Parser, Debug)]
#[command(name = "cstore", version, about = "Storage codes on coset graphs of binary codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for every randomized step; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Memory budget for dense matrices, in bytes.
    #[arg(long, global = true)]
    pub mem_budget: Option<u64>,

    /// Force the four-Russians elimination.
    #[arg(long, global = true, conflicts_with = "plain")]
    pub accelerated: bool,

    /// Force plain Gaussian elimination.
    #[arg(long, global = true)]
    pub plain: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rate of the storage code on the coset graph of a code.
    Rate(CodeSource),
    /// Necessary conditions and combinatorial bounds for a code.
    Check {
        #[command(flatten)]
        source: CodeSource,
        /// Largest k for the Schur-power containment checks.
        #[arg(long, default_value_t = cstore::cosetgraph::DEFAULT_K_MAX)]
        kmax: usize,
    },
    /// Recompute the reference table of storage rates.
    Reproduce {
        /// Include the N = 65536 BCH instance.
        #[arg(long)]
        extended: bool,
    },
    /// Erasure recovery on an edge-vertex storage code.
    Simulate(simulate::SimulateArgs),
    /// Adjacency spectrum of a coset graph.
    Spectrum {
        #[command(flatten)]
        source: CodeSource,
        /// Print every eigenvalue with its multiplicity.
        #[arg(long)]
        histogram: bool,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct CodeSource {
    /// Code family, e.g. `repetition:5`, `bch2:6`, `golay23`.
    #[arg(long)]
    pub family: Option<CodeFamilyId>,
    /// Parity-check matrix file: `n r` header, then r rows of n bits.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl CodeSource {
    pub fn family_id(&self) -> CodeFamilyId {
        match (&self.family, &self.file) {
            (Some(f), _) => f.clone(),
            (None, Some(p)) => CodeFamilyId::FromFile(p.clone()),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
pub enum Failure {
    /// Computation finished but disagrees with expectations; output was written.
    Mismatch(String),
    Input(String),
    Capacity(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Mismatch(_) => exit::MISMATCH,
            Failure::Input(_) => exit::INPUT,
            Failure::Capacity(_) => exit::CAPACITY,
        }
    }
}

impl From<cstore::Error> for Failure {
    fn from(e: cstore::Error) -> Self {
        if e.is_capacity() {
            Failure::Capacity(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Mismatch(m) => write!(f, "mismatch: {m}"),
            Failure::Input(m) => write!(f, "error: {m}"),
            Failure::Capacity(m) => write!(f, "{m}"),
        }
    }
}

pub struct Settings {
    pub format: Format,
    pub seed: u64,
    pub method: Option<Elimination>,
}

fn configure(cli: &Cli, env_budget: Option<String>) -> Result<Settings, Failure> {
    let budget = match env_budget {
        Some(v) => Some(
            v.trim()
                .parse::<u64>()
                .map_err(|e| Failure::Input(format!("{MEM_BUDGET_ENV}={v:?}: {e}")))?,
        ),
        None => cli.mem_budget,
    };
    if let Some(b) = budget {
        if b == 0 {
            return Err(Failure::Input("memory budget must be positive".into()));
        }
        MemoryGate::global().set_budget(b);
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Input("--threads must be positive".into()));
        }
        // Fails only if a pool already exists, as in repeated in-process runs.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let method = if cli.accelerated {
        Some(Elimination::four_russians())
    } else if cli.plain {
        Some(Elimination::Plain)
    } else {
        None
    };
    Ok(Settings {
        format: cli.format,
        seed: cli.seed,
        method,
    })
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, env_budget: Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = configure(cli, env_budget).and_then(|s| dispatch(cli, &s, out));
    match result {
        Ok(()) => exit::OK,
        Err(f) => {
            let _ = writeln!(err, "{f}");
            f.code()
        }
    }
}

fn dispatch(cli: &Cli, s: &Settings, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Rate(src) => commands::rate(src, s, out),
        Command::Check { source, kmax } => commands::check(source, *kmax, s, out),
        Command::Reproduce { extended } => reproduce::run(*extended, s, out),
        Command::Simulate(args) => simulate::run(args, s, out),
        Command::Spectrum { source, histogram } => commands::spectrum(source, *histogram, s, out),
    }
}
