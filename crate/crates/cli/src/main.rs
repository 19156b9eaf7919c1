//! `pru`: evaluate, compare, normalize and enumerate primitive recursive
//! descriptions, and report on the automorphism groups of their universes.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prdesc_core::{Op, Universe};

use config::{Config, Format};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "pru", version, about = "Primitive recursive descriptions and their universes")]
struct Cli {
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long, env = "PRU_CONFIG", global = true)]
    config: Option<PathBuf>,
    /// Inputs range over 0..GRID in fingerprints.
    #[arg(long, global = true)]
    grid: Option<u64>,
    /// Evaluation step budget.
    #[arg(long, global = true)]
    steps: Option<u64>,
    /// Largest bit length of any intermediate value.
    #[arg(long, global = true)]
    bits: Option<u64>,
    /// Largest term size explored by closure searches.
    #[arg(long, global = true)]
    caps_size: Option<usize>,
    /// Largest number of terms in one closure search.
    #[arg(long, global = true)]
    caps_count: Option<usize>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Enables the parametric recursion schemas in CatN and CatXN.
    #[arg(long, global = true)]
    parametric_nno: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FragmentArgs {
    /// Largest term size.
    #[arg(long)]
    size: Option<usize>,
    /// Largest domain and codomain width.
    #[arg(long)]
    width: Option<usize>,
    /// Leave out recursion nodes.
    #[arg(long)]
    no_rec: bool,
    /// Largest hom-set.
    #[arg(long)]
    capacity: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a term on one input tuple.
    Eval {
        /// Term, or @FILE to read it from a file.
        term: String,
        /// Comma separated naturals.
        #[arg(long = "in", value_name = "X1,X2,...")]
        input: String,
    },
    /// Decide or bound equality of two terms in a universe.
    Check {
        left: String,
        right: String,
        #[arg(short, long)]
        universe: Option<Universe>,
        /// Print the rewrite path and replay it.
        #[arg(long)]
        witness: bool,
    },
    /// Canonical form in C, I or Cat; best-effort form in CatX.
    Normalize {
        term: String,
        #[arg(short, long)]
        universe: Option<Universe>,
    },
    /// Enumerate a finite fragment.
    Enum {
        #[command(flatten)]
        fragment: FragmentArgs,
        /// Also print every term.
        #[arg(long)]
        terms: bool,
    },
    /// Check the partition and group correspondence on a fragment.
    Galois {
        #[command(flatten)]
        fragment: FragmentArgs,
        #[arg(long, value_delimiter = ',')]
        universes: Option<Vec<Universe>>,
        /// Number of sampled subgroups.
        #[arg(long, default_value_t = 24)]
        samples: usize,
        /// Also compute the subgroup preserving these operations.
        #[arg(long, value_delimiter = ',')]
        ops: Option<Vec<Op>>,
        /// With --ops, also fix z, s and the projections.
        #[arg(long, requires = "ops")]
        fix_initials: bool,
    },
    /// Refinement diagram of universe partitions on a fragment.
    Lattice {
        #[command(flatten)]
        fragment: FragmentArgs,
        #[arg(long, value_delimiter = ',')]
        universes: Option<Vec<Universe>>,
    },
    /// Random self-checks of parsing, normal forms, rules and the decider.
    Fuzz {
        /// Number of random terms.
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

impl Cli {
    fn config(&self) -> Result<Config, CliError> {
        let mut c = match &self.config {
            Some(path) => Config::from_file(path)?,
            None => Config::default(),
        };
        macro_rules! over {
            ($($field:ident),*) => {$( if let Some(v) = self.$field { c.$field = v; } )*};
        }
        over!(grid, steps, bits, caps_size, caps_count, format, seed);
        c.parametric_nno |= self.parametric_nno;
        let frag = match &self.command {
            Command::Enum { fragment, .. } | Command::Galois { fragment, .. } | Command::Lattice { fragment, .. } => {
                Some(fragment)
            }
            _ => None,
        };
        if let Some(f) = frag {
            c.max_size = f.size.unwrap_or(c.max_size);
            c.max_width = f.width.unwrap_or(c.max_width);
            c.capacity = f.capacity.unwrap_or(c.capacity);
            c.allow_rec &= !f.no_rec;
        }
        if let Command::Check { universe: Some(u), .. } | Command::Normalize { universe: Some(u), .. } = &self.command {
            c.universe = *u;
        }
        c.validate()?;
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.config().and_then(|cfg| commands::run(&cli.command, &cfg));
    match result {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e}");
            e.status().into()
        }
    }
}
