//! `hcon`: command-line front end for the Herbrand consistency workbench.
//!
//! Exit codes: 0 witness or true, 1 inconsistent or false, 2 input error,
//! 3 budget exhausted.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hcon::search::{SearchOptions, Strategy};

use commands::{HullArgs, Search};
use input::{CliError, TheorySource};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Brute,
    Propagate,
}

#[derive(Parser, Debug)]
#[command(name = "hcon", version, about = "Skolem hulls and evaluation search for arithmetic theories")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, env = "HCON_FORMAT", value_enum, default_value = "text")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct TheoryArgs {
    /// Built-in theory: EX2, EX3, EX3_PLUS, T1, IND_SQ or OMEGA0.
    #[arg(long)]
    preset: Option<String>,
    /// Theory file, one closed formula per line.
    #[arg(long)]
    theory: Option<PathBuf>,
    /// A closed formula; repeat for several axioms.
    #[arg(long)]
    formula: Vec<String>,
}

#[derive(Args, Debug)]
#[group(required = false, multiple = false)]
struct OptionalTheoryArgs {
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    theory: Option<PathBuf>,
}

impl From<TheoryArgs> for TheorySource {
    fn from(a: TheoryArgs) -> TheorySource {
        TheorySource { preset: a.preset, theory: a.theory, formula: a.formula }
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "propagate")]
    strategy: StrategyArg,
    /// Node limit per root branch.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// Report all constraints instead of a minimized conflict core.
    #[arg(long)]
    no_minimize: bool,
    /// Largest core domain to re-verify exhaustively.
    #[arg(long, default_value_t = 9)]
    verify_max: usize,
}

impl From<SearchArgs> for Search {
    fn from(a: SearchArgs) -> Search {
        Search {
            options: SearchOptions {
                strategy: match a.strategy {
                    StrategyArg::Brute => Strategy::Brute,
                    StrategyArg::Propagate => Strategy::Propagate,
                },
                node_budget: a.budget,
                jobs: a.jobs as usize,
                minimize_core: !a.no_minimize,
            },
            verify_max: a.verify_max,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the normal form, partial and full Skolemization of each axiom.
    Skolemize {
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Look for an evaluation of a term set satisfying the available instances.
    Solve {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Term-set file, one term per line.
        #[arg(long)]
        terms: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search growing hulls of a base set for one with no evaluation.
    Refute {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Comma-separated base terms.
        #[arg(long, default_value = "0")]
        base: String,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        /// Stop before a level that could exceed this many terms.
        #[arg(long, default_value_t = 5000)]
        max_terms: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide whether every evaluation satisfies psi at a given term.
    CheckUniversal {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Open formula with at most one free variable.
        #[arg(long)]
        psi: String,
        /// Term substituted for the free variable.
        #[arg(long)]
        term: String,
        #[arg(long)]
        terms: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the finite structure of the first evaluation found.
    Model {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long)]
        terms: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Iterate the Skolem hull of a base set.
    Hull {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value = "0")]
        base: String,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Code threshold for admissible Skolem symbols; defaults to the
        /// theory's own.
        #[arg(long)]
        threshold: Option<String>,
        /// Use every registered symbol below the threshold, not only the
        /// theory's.
        #[arg(long)]
        full: bool,
        /// Report the first level containing this term.
        #[arg(long)]
        find: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        max_terms: usize,
    },
    /// Gödel codes and growth reports.
    Code {
        #[command(subcommand)]
        what: CodeCommand,
    },
}

#[derive(Subcommand, Debug)]
enum CodeCommand {
    /// Value size against code size along q_0 = S(S(0)), q_{i+1} = q(q_i).
    QChain {
        #[command(flatten)]
        theory: OptionalTheoryArgs,
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
    /// omega_n(x).
    Omega {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1 << 24)]
        budget_bits: u64,
    },
    /// Code of a term.
    Term { term: String },
    /// Code of a formula.
    Formula { formula: String },
}

fn run(cmd: Command) -> Result<report::Report, CliError> {
    match cmd {
        Command::Skolemize { theory } => commands::skolemize(&theory.into()),
        Command::Solve { theory, terms, search } => commands::solve(&theory.into(), &terms, &search.into()),
        Command::Refute { theory, base, max_level, max_terms, search } => {
            commands::refute(&theory.into(), &base, max_level, max_terms, &search.into())
        }
        Command::CheckUniversal { theory, psi, term, terms, search } => {
            commands::check_universal_cmd(&theory.into(), &psi, &term, &terms, &search.into())
        }
        Command::Model { theory, terms, search } => commands::model(&theory.into(), &terms, &search.into()),
        Command::Hull { theory, base, level, threshold, full, find, max_terms } => commands::hull(
            &theory.into(),
            &HullArgs { base: &base, level, threshold: threshold.as_deref(), full, find: find.as_deref(), max_terms },
        ),
        Command::Code { what } => match what {
            CodeCommand::QChain { theory, n, csv } => {
                let src = (theory.preset.is_some() || theory.theory.is_some()).then(|| TheorySource {
                    preset: theory.preset,
                    theory: theory.theory,
                    formula: Vec::new(),
                });
                commands::q_chain(src.as_ref(), n, csv)
            }
            CodeCommand::Omega { n, x, budget_bits } => commands::omega_cmd(n, &x, budget_bits),
            CodeCommand::Term { term } => commands::code_term(&term),
            CodeCommand::Formula { formula } => commands::code_formula(&formula),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&r.json()).expect("serializable"));
                }
            }
            ExitCode::from(r.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
