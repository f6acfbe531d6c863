use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use henson_cli::commands::{self, DividesOpts, Relation, Report, EXIT_INPUT};
use henson_cli::fuzz::{self, FuzzOpts, Mutation};
use henson_cli::problem::{load, max_vertices, InputError};

#[derive(Parser)]
#[command(
    name = "henson",
    version,
    about = "Dividing and forking in the generic K_n-free graph"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rel {
    #[value(name = "d")]
    Dividing,
    #[value(name = "f")]
    Forking,
    #[value(name = "R")]
    Edge,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does the formula of the problem file divide over C?
    Divides {
        file: PathBuf,
        /// Decide in the random graph instead.
        #[arg(long)]
        t0: bool,
        /// Cross-check against the brute-force oracle (exit 3 on mismatch).
        #[arg(long)]
        oracle: bool,
        #[arg(long = "lmax")]
        l_max: Option<usize>,
    },
    /// Is A independent from B over C?
    Indep {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "d")]
        rel: Rel,
        #[arg(long)]
        oracle: bool,
        #[arg(long = "lmax")]
        l_max: Option<usize>,
    },
    /// The Γ sequence of the first bound witness.
    Gamma {
        file: PathBuf,
        /// Number of copies to print (at least n are checked).
        #[arg(long)]
        len: Option<usize>,
    },
    /// Brute-force dividing check alone.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        t0: bool,
        #[arg(long = "lmax")]
        l_max: Option<usize>,
    },
    /// Verify the disjunction that forks without dividing.
    Example62 {
        n: usize,
        #[arg(long = "lmax")]
        l_max: Option<usize>,
    },
    /// Scan every pattern of four edge-free columns.
    Lemma61,
    /// Random instances through criteria, oracle and invariants; with
    /// files given, replay them instead.
    Fuzz {
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Inject a criterion bug.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
        /// Directory for replay files of failing instances.
        #[arg(long, default_value = "fuzz-failures")]
        out: PathBuf,
        #[arg(long = "lmax")]
        l_max: Option<usize>,
    },
}

fn dispatch(cmd: Cmd) -> Result<Report, InputError> {
    let limit = max_vertices()?;
    match cmd {
        Cmd::Divides {
            file,
            t0,
            oracle,
            l_max,
        } => commands::divides(&load(&file, limit)?, DividesOpts { t0, oracle, l_max }),
        Cmd::Indep {
            file,
            rel,
            oracle,
            l_max,
        } => {
            let rel = match rel {
                Rel::Dividing => Relation::Dividing,
                Rel::Forking => Relation::Forking,
                Rel::Edge => Relation::Edge,
            };
            commands::indep(&load(&file, limit)?, rel, oracle, l_max)
        }
        Cmd::Gamma { file, len } => commands::gamma_cmd(&load(&file, limit)?, len),
        Cmd::Oracle { file, t0, l_max } => commands::oracle_cmd(&load(&file, limit)?, t0, l_max),
        Cmd::Example62 { n, l_max } => commands::example62(n, l_max),
        Cmd::Lemma61 => Ok(commands::lemma61()),
        Cmd::Fuzz {
            files,
            n,
            trials,
            seed,
            max_vertices,
            mutate,
            out,
            l_max,
        } => {
            if files.is_empty() {
                fuzz::run(&FuzzOpts {
                    n,
                    trials,
                    seed,
                    max_vertices,
                    mutate,
                    out,
                    l_max,
                })
            } else {
                fuzz::replay(&files, limit, l_max, mutate)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(r) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&r.body).expect("report serialises")
            );
            ExitCode::from(r.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
