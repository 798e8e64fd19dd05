use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mmdweak::experiment::{self, ConfigFile, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(
    name = "mmdweak",
    version,
    about = "MMD and weak-convergence experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one preset and write <out>/<preset>.csv and <out>/<preset>.summary.
    Run {
        /// TOML config file; optional when --preset is given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long = "nmax")]
        n_max: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the preset table.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            print!("{}", experiment::list_presets());
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            preset,
            n_max,
            seed,
            out,
        } => {
            let file = match config {
                Some(path) => match ConfigFile::load(&path) {
                    Ok(f) => f,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
                None => ConfigFile::default(),
            };
            let flags = Overrides {
                preset,
                n_max,
                seed,
                out,
            };
            let cfg = match ExperimentConfig::resolve(file, flags) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match experiment::run(&cfg) {
                Ok(outcome) => {
                    for (k, v) in &outcome.verdicts {
                        println!("{k}={v}");
                    }
                    println!("csv={}", outcome.csv_path.display());
                    println!("summary={}", outcome.summary_path.display());
                    if outcome.success() {
                        ExitCode::SUCCESS
                    } else {
                        eprint!("verdict mismatch:\n{}", outcome.diff());
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
