use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pulsebeam_cli::commands::{self, Command, THREADS_ENV};
use pulsebeam_cli::{CliError, RunConfig};

#[derive(Parser)]
#[command(name = "pulsebeam", version, about = "Sample extended wave propagators and pulsed-beam channels")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Complex distance p, q and spheroidal coordinates over a spatial grid.
    Distance(RunArgs),
    /// Extended propagator over a spacetime grid.
    Propagator(RunArgs),
    /// Pulsed-beam wavelet for a driving signal over a spacetime grid.
    Wavelet(RunArgs),
    /// Far-zone beam pattern versus angle.
    Pattern(RunArgs),
    /// Channel metrics and amplitude, plus a receiver-tilt gain scan.
    Channel(RunArgs),
    /// Run the verification checks and print a pass/fail table.
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; overrides the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; overrides the environment and the config.
    #[arg(long)]
    threads: Option<usize>,
}

fn execute(cmd: Command, args: RunArgs) -> Result<(), CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let env = std::env::var(THREADS_ENV).ok();
    let threads = commands::resolve_threads(args.threads, env.as_deref(), cfg.threads)?;
    let out = args.out.or_else(|| cfg.output_path());
    commands::run(cmd, &cfg, out, threads)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = match cli.command {
        Sub::Distance(a) => (Command::Distance, a),
        Sub::Propagator(a) => (Command::Propagator, a),
        Sub::Wavelet(a) => (Command::Wavelet, a),
        Sub::Pattern(a) => (Command::Pattern, a),
        Sub::Channel(a) => (Command::Channel, a),
        Sub::Verify => {
            return if commands::verify_all() { ExitCode::SUCCESS } else { ExitCode::from(2) };
        }
    };
    match execute(cmd, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pulsebeam: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
