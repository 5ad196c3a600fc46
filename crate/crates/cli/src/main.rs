//! `matroid-hodge`: Bergman fans, Chow rings and Hodge-Riemann checks from
//! the command line.

mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{CliError, Outcome};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "matroid-hodge", version, about = "Exact Chow ring and Hodge theory checks for matroids")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse inputs with more elements than this.
    #[arg(long, global = true, value_name = "N", default_value_t = matroid_hodge::subset::MAX_GROUND)]
    max_ground: usize,
    /// Seed for randomized choices (`--ell random`).
    #[arg(long, global = true, value_name = "K", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// A built-in matroid; see `catalog list`.
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
    /// A JSON matroid description or an edge-list graph.
    #[arg(long, value_name = "PATH")]
    input: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FilterArg {
    /// Order filter: full, empty, chain (every filter of the flip chain),
    /// chain:J (the J-th one) or rank:K (flats of rank at least K).
    #[arg(long, value_name = "FILTER", default_value = "full")]
    filter: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Order {
    HighRankFirst,
    HighRankLast,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Built-in matroids.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Basic invariants of a matroid.
    Matroid {
        #[command(subcommand)]
        action: MatroidAction,
    },
    /// Characteristic polynomial by subset sums and by the Möbius function.
    Charpoly {
        #[command(flatten)]
        source: Source,
    },
    /// Bergman fans.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Chow rings.
    Chow {
        #[command(subcommand)]
        action: ChowAction,
    },
    /// Matroidal flips.
    Flip {
        #[command(subcommand)]
        action: FlipAction,
    },
    /// Hard Lefschetz and Hodge-Riemann relations.
    Hodge {
        #[command(subcommand)]
        action: HodgeAction,
    },
    /// Log-concavity of μ, w, f and of chromatic polynomials.
    Logconcave {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
}

#[derive(Subcommand, Debug)]
enum MatroidAction {
    Info {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Subcommand, Debug)]
enum FanAction {
    /// Fan property, purity and unimodularity.
    Check {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArg,
        /// Use the reduced fan (no ray e_E).
        #[arg(long)]
        reduced: bool,
        /// Include rays and cones in the report.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ChowAction {
    /// Hilbert function and monomial basis.
    Dims {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArg,
        /// List the basis monomials.
        #[arg(long)]
        basis: bool,
    },
    /// Poincaré duality over Q and over Z.
    Pd {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArg,
    },
}

#[derive(Subcommand, Debug)]
enum FlipAction {
    /// Decomposition of every flip along a chain from the empty filter.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "high-rank-first")]
        order: Order,
    },
}

#[derive(Subcommand, Debug)]
enum HodgeAction {
    /// HL and HR at every level for an ample class.
    Certify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArg,
        /// default, random, or a file of `label value` lines.
        #[arg(long, value_name = "ELL", default_value = "default")]
        ell: String,
        /// Accept a convex but not strictly convex class.
        #[arg(long)]
        nef_only: bool,
    },
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let caps = input::Caps::new(cli.max_ground)?;
    match &cli.command {
        Command::Catalog { action: CatalogAction::List } => Ok(commands::catalog_list()),
        Command::Matroid { action: MatroidAction::Info { source } } => {
            commands::matroid_info(&input::load(source, &caps)?)
        }
        Command::Charpoly { source } => commands::charpoly(&input::load(source, &caps)?),
        Command::Fan { action: FanAction::Check { source, filter, reduced, dump } } => {
            commands::fan_check(&input::load(source, &caps)?, &filter.filter, *reduced, *dump)
        }
        Command::Chow { action: ChowAction::Dims { source, filter, basis } } => {
            commands::chow_dims(&input::load(source, &caps)?, &filter.filter, *basis)
        }
        Command::Chow { action: ChowAction::Pd { source, filter } } => {
            commands::chow_pd(&input::load(source, &caps)?, &filter.filter)
        }
        Command::Flip { action: FlipAction::Verify { source, order } } => {
            commands::flip_verify(&input::load(source, &caps)?, *order)
        }
        Command::Hodge { action: HodgeAction::Certify { source, filter, ell, nef_only } } => {
            commands::hodge_certify(&input::load(source, &caps)?, &filter.filter, ell, *nef_only, cli.seed)
        }
        Command::Logconcave { source } => commands::logconcave(&input::load(source, &caps)?),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = CliError::usage(e.render().to_string().trim().to_string());
            return output::emit_error(&err, json);
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => output::emit(&outcome, cli.json),
        Err(err) => output::emit_error(&err, cli.json),
    }
}
