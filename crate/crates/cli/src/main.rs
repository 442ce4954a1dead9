use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ffalab_cli::commands::{self, RunOptions, SuiteOverrides, VerifyOptions};
use ffalab_cli::CliError;
use ffalab_core::solvers::{Algorithm, DEFAULT_BUDGET};
use ffalab_core::TieRule;

#[derive(Parser)]
#[command(name = "ffalab", version, about = "Frequency fitness assignment experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on one problem (or instance set) for several seeds.
    Run {
        /// ea, fea, ma or ffa-ma
        #[arg(long)]
        algo: Algorithm,
        /// e.g. onemax:s=32, wmodel:id=3, maxsat:dir=data/maxsat/uf20,glob=*.cnf, jssp:path=data/jssp/ft06.txt
        #[arg(long)]
        problem: String,
        #[arg(long, default_value = "identity")]
        transform: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = TieRule::Le)]
        tie: TieRule,
        /// stop when the objective reaches this value (jssp only; default: bks or lower bound)
        #[arg(long)]
        target: Option<u64>,
        /// wall-clock limit per run in seconds
        #[arg(long)]
        time_limit: Option<f64>,
        /// instance,bks CSV for jssp targets
        #[arg(long)]
        bks: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Run every cell of a JSON suite file and write summary.csv.
    Suite {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// worker threads, 0 = all cores
        #[arg(long)]
        parallelism: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        runs: Option<u64>,
        #[arg(long)]
        base_seed: Option<u64>,
    },
    /// Check that FEA trajectories do not change under objective transforms
    /// or between problems that share a level-set structure.
    VerifyInvariance {
        #[arg(long)]
        problem: String,
        /// comma-separated transform specs
        #[arg(long, value_delimiter = ',', default_value = "md5")]
        transforms: Vec<String>,
        /// problems whose FEA runs must visit the same solutions
        #[arg(long)]
        against: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = TieRule::Le)]
        tie: TieRule,
    },
    /// Summarize a directory of run logs.
    Stats {
        #[arg(long)]
        logs: PathBuf,
        /// summary CSV (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// directory for per-dimension ECDF point files
        #[arg(long)]
        ecdf: Option<PathBuf>,
    },
    /// Generate satisfiable uniform random k-SAT instances in DIMACS format.
    GenCnf {
        #[arg(long, default_value_t = 20)]
        vars: usize,
        #[arg(long, default_value_t = 91)]
        clauses: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "uf20-")]
        prefix: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cmd: Command) -> Result<(String, bool), CliError> {
    match cmd {
        Command::Run {
            algo,
            problem,
            transform,
            seed,
            runs,
            budget,
            tie,
            target,
            time_limit,
            bks,
            out,
        } => commands::cmd_run(&RunOptions {
            algo,
            problem,
            transform,
            seed,
            runs,
            budget,
            tie,
            target,
            time_limit,
            bks,
            out,
        })
        .map(|s| (s, true)),
        Command::Suite {
            config,
            out,
            parallelism,
            budget,
            runs,
            base_seed,
        } => {
            let suite = commands::load_suite(&config)?;
            let ov = SuiteOverrides {
                out,
                parallelism,
                budget,
                runs,
                base_seed,
            };
            commands::cmd_suite(&suite, &ov).map(|s| (s, true))
        }
        Command::VerifyInvariance {
            problem,
            transforms,
            against,
            seed,
            seeds,
            budget,
            tie,
        } => commands::cmd_verify_invariance(&VerifyOptions {
            problem,
            transforms,
            against,
            seed,
            seeds,
            budget,
            tie,
        }),
        Command::Stats { logs, out, ecdf } => {
            let report = commands::cmd_stats(&logs)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(dir) = ecdf {
                fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                for (name, text) in &report.ecdf {
                    let path = dir.join(name);
                    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                }
            }
            match out {
                Some(path) => {
                    fs::write(&path, &report.csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    Ok((String::new(), true))
                }
                None => Ok((report.csv, true)),
            }
        }
        Command::GenCnf {
            vars,
            clauses,
            k,
            count,
            seed,
            prefix,
            out,
        } => commands::cmd_gen_cnf(vars, clauses, k, count, seed, &prefix, &out).map(|s| (s, true)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok((text, pass)) => {
            print!("{text}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
