use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nk_memetic::harness::{run_experiment, table_from_dir, ExperimentSpec, HarnessError};
use nk_memetic::landscape::{load_instance, save_instance};
use nk_memetic::{brute_force_optimum, NkInstance};

#[derive(Parser)]
#[command(
    name = "nk-memetic",
    version,
    about = "Memetic search on NK landscapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and write it to a file.
    GenInstance {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment described by a TOML spec.
    Run {
        spec: PathBuf,
        /// Output directory; overrides `output_dir` in the spec.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild and print the result table of a finished experiment directory.
    Table { dir: PathBuf },
    /// Exhaustively find the global optimum (n <= 24).
    Oracle {
        /// Instance file; otherwise --n, --k and --seed are required.
        instance: Option<PathBuf>,
        #[arg(long, requires_all = ["k", "seed"], conflicts_with = "instance")]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

enum Failure {
    Spec(String),
    Partial(String),
    Other(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_spec_error() {
            Failure::Spec(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::GenInstance { n, k, seed, out } => {
            let inst =
                NkInstance::generate(n, k, seed).map_err(|e| Failure::Spec(e.to_string()))?;
            save_instance(&inst, &out).map_err(|e| Failure::Other(e.to_string()))?;
            println!("wrote {}", out.display());
        }
        Command::Run { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| Failure::Spec(format!("{}: {e}", spec.display())))?;
            let spec = ExperimentSpec::from_toml(&text)?;
            let dir = out.or_else(|| spec.output_dir.clone()).ok_or_else(|| {
                Failure::Spec("no output directory: pass --out or set output_dir".into())
            })?;
            let outcome = run_experiment(&spec, Some(&dir))?;
            print!("{}", outcome.table.render_text());
            if !outcome.failures.is_empty() {
                for f in &outcome.failures {
                    eprintln!("trial {} of {} failed: {}", f.trial, f.algorithm, f.message);
                }
                return Err(Failure::Partial(format!(
                    "{} of {} trials failed",
                    outcome.failures.len(),
                    outcome.failures.len() + outcome.records.len()
                )));
            }
        }
        Command::Table { dir } => {
            let table = table_from_dir(&dir)?;
            print!("{}", table.render_text());
        }
        Command::Oracle {
            instance,
            n,
            k,
            seed,
        } => {
            let inst = match (instance, n, k, seed) {
                (Some(path), ..) => {
                    load_instance(&path).map_err(|e| Failure::Spec(e.to_string()))?
                }
                (None, Some(n), Some(k), Some(seed)) => {
                    NkInstance::generate(n, k, seed).map_err(|e| Failure::Spec(e.to_string()))?
                }
                _ => {
                    return Err(Failure::Spec(
                        "give an instance file or --n, --k and --seed".into(),
                    ))
                }
            };
            let (genome, fitness) =
                brute_force_optimum(&inst).map_err(|e| Failure::Spec(e.to_string()))?;
            println!("{genome}\t{fitness}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Spec(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Partial(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
