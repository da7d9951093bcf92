use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

/// Periodic qubit-lattice simulator.
#[derive(Debug, Parser)]
#[command(name = "qlattice", version, about)]
struct Cli {
    /// Run configuration (flat `key=value` text). Defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output snapshot path; overrides `out` in the configuration.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// RNG seed; overrides `seed` in the configuration.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the configured initial state and write snapshots.
    Evolve,
    /// Report on one or more snapshot files.
    Analyze {
        #[arg(value_enum)]
        report: Report,
        /// Snapshot files. For `period`, the initial state followed by one
        /// snapshot per sweep.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Fidelity tolerance for `period`.
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
    },
    /// Superpose a second state onto the initial state and write the result.
    Prepare,
    /// Grover-amplify the target and sample measurements.
    Detect,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Report {
    Dominance,
    Period,
    Uniformity,
    Backproject,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = commands::Overrides {
        out: cli.out,
        seed: cli.seed,
    };
    match cli.command {
        Command::Evolve => {
            let cfg = commands::load_config(cli.config.as_deref(), &overrides)?;
            commands::evolve(&cfg)
        }
        Command::Analyze {
            report,
            paths,
            delta,
        } => match report {
            Report::Dominance => commands::analyze_dominance(&paths),
            Report::Period => commands::analyze_period(&paths, delta),
            Report::Uniformity => commands::analyze_uniformity(&paths),
            Report::Backproject => commands::analyze_backproject(&paths),
        },
        Command::Prepare => {
            let cfg = commands::load_config(cli.config.as_deref(), &overrides)?;
            commands::prepare(&cfg)
        }
        Command::Detect => {
            let cfg = commands::load_config(cli.config.as_deref(), &overrides)?;
            commands::detect(&cfg)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
