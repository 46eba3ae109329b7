use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wfs_cli::eval::{EvalArgs, OutputKind};
use wfs_cli::fuzz::{FuzzArgs, Mode};
use wfs_cli::pipeline::GroundMode;
use wfs_cli::{bench, eval, fuzz, CliResult, Failure};
use wfs_core::gen::Family;

#[derive(Parser)]
#[command(name = "wfs", version, about = "Well-founded model computation by program transformation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program and print its model and/or remainder.
    Eval {
        #[arg(long)]
        program: PathBuf,
        /// Query atom, e.g. 'p(a)'. Restricts the printed model to its instances.
        #[arg(long)]
        query: Option<String>,
        /// Strategy name (fitting, afp, remainder, wfmst, wfrem, mafp, mrem) or expression.
        #[arg(long, default_value = "remainder")]
        strategy: String,
        /// Rewrite the program with magic sets for the query first.
        #[arg(long)]
        magic: bool,
        #[arg(long, value_enum, default_value = "scc")]
        ground: GroundMode,
        #[arg(long, value_enum, default_value = "model")]
        output: OutputKind,
        /// Compare with the alternating fixpoint oracle; exit 2 on disagreement.
        #[arg(long)]
        check_oracle: bool,
        /// Write work counts as CSV.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Run strategies over a program family and emit CSV.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "afp,remainder")]
        strategies: Vec<String>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Differential checks over random programs.
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 30)]
        max_atoms: usize,
        #[arg(long, default_value_t = 60)]
        max_rules: usize,
        #[arg(long, value_enum, default_value = "confluence")]
        mode: Mode,
    },
}

fn dispatch(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Eval { program, query, strategy, magic, ground, output, check_oracle, stats } => {
            let text =
                std::fs::read_to_string(&program).map_err(|e| Failure::Input(format!("{}: {e}", program.display())))?;
            eval::run(&EvalArgs {
                program_text: text,
                program_name: program.display().to_string(),
                query,
                strategy,
                magic,
                ground,
                output,
                check_oracle,
                stats,
            })
        }
        Command::Bench { family, n, strategies, out } => {
            let family: Family = family.parse().map_err(Failure::Input)?;
            let rows = bench::run(&[family], &n, &strategies)?;
            match out {
                Some(path) => bench::write_rows(&path, &rows).map(|_| String::new()),
                None => bench::to_csv(&rows),
            }
        }
        Command::Fuzz { seed, count, max_atoms, max_rules, mode } => {
            let report = fuzz::run(&FuzzArgs { seed, count, max_atoms, max_rules, mode });
            let text = report.render();
            match report.failure {
                None => Ok(format!("{text}\n")),
                Some(_) => Err(Failure::Mismatch(text)),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
