use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spikes_cli::commands::{self, CliError};
use spikes_cli::format::{Relabel, SpikeMode};
use spikes_cli::verify::{parse_suites, SuiteConfig, DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Parser)]
#[command(
    name = "spikes",
    version,
    about = "Binary spikes, es-splitting and relaxation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a rank-r spike on x1..xr, y1..yr, t.
    GenSpike(GenSpikeArgs),
    /// es-split a matroid file at (X, e).
    Essplit {
        input: PathBuf,
        /// Comma-separated labels of X.
        #[arg(long)]
        x: String,
        /// Label of e; must be in X.
        #[arg(long)]
        e: String,
        #[arg(long, value_enum, default_value_t = RelabelArg::None)]
        relabel: RelabelArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relax a circuit-hyperplane.
    Relax {
        input: PathBuf,
        /// Comma-separated labels of the circuit.
        #[arg(long)]
        circuit: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print rank, circuit counts, binarity, connectivity and spike structure.
    Props {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run verification suites.
    Verify {
        /// `all` or comma-separated claim ids.
        #[arg(long, default_value = "all")]
        suites: String,
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Write every report, one JSON object per line.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include elapsed times in the reports (makes them run-dependent).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ModeArgs {
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    free: bool,
    /// JSON file listing the size-r transversal circuits.
    #[arg(long, value_name = "FILE")]
    c3: Option<PathBuf>,
}

#[derive(Args)]
struct GenSpikeArgs {
    #[arg(long)]
    rank: usize,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelabelArg {
    None,
    Auto,
}

fn run(cli: Cli) -> Result<(u8, String), CliError> {
    let ok = |s: String| Ok((commands::EXIT_OK, s));
    match cli.command {
        Command::GenSpike(a) => {
            let mode = if a.mode.binary {
                SpikeMode::Binary
            } else if a.mode.free {
                SpikeMode::Free
            } else {
                SpikeMode::C3
            };
            ok(commands::gen_spike(
                a.rank,
                mode,
                a.mode.c3.as_deref(),
                a.out.as_deref(),
            )?)
        }
        Command::Essplit {
            input,
            x,
            e,
            relabel,
            out,
        } => {
            let relabel = match relabel {
                RelabelArg::None => Relabel::None,
                RelabelArg::Auto => Relabel::Auto,
            };
            ok(commands::essplit(&input, &x, &e, relabel, out.as_deref())?)
        }
        Command::Relax {
            input,
            circuit,
            out,
        } => ok(commands::relax(&input, &circuit, out.as_deref())?),
        Command::Props { input, json } => ok(commands::props(&input, json)?),
        Command::Verify {
            suites,
            max_rank,
            jobs,
            seed,
            samples,
            report,
            timings,
        } => {
            if !(3..=7).contains(&max_rank) {
                return Err(CliError::usage("--max-rank must be between 3 and 7"));
            }
            let cfg = SuiteConfig {
                suites: parse_suites(&suites).map_err(CliError::usage)?,
                max_rank,
                jobs: jobs
                    .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
                seed,
                samples,
                timings,
            };
            commands::verify(&cfg, report.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((code, out)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
