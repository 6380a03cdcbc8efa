use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mwss_cli::{emit, exit_code, run_text, Flags, Format, Kind};

#[derive(Parser)]
#[command(
    name = "mwss",
    version,
    about = "Monodromy, weight spectral sequence, Lefschetz pencil and critical-trait computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized searches.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest extension degree scanned by lefscan.
    #[arg(long, global = true)]
    emax: Option<u32>,
    /// Weighted-degree precision for critps.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Number of pencils a lefscan search may try.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Monodromy filtration of a nilpotent matrix.
    Mono { file: PathBuf },
    /// Weight spectral sequence of a semistable degeneration.
    Rzss { file: PathBuf },
    /// Lefschetz pencil certification over a finite field.
    Lefscan { file: PathBuf },
    /// Critical trait of a semistable Morse function.
    Critps { file: PathBuf },
    /// Koszul complex of a dual complex.
    Koszul { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, file) = match &cli.command {
        Command::Mono { file } => (Kind::Mono, file),
        Command::Rzss { file } => (Kind::Rzss, file),
        Command::Lefscan { file } => (Kind::Lefscan, file),
        Command::Critps { file } => (Kind::Critps, file),
        Command::Koszul { file } => (Kind::Koszul, file),
    };
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let flags = Flags {
        seed: cli.seed,
        e_max: cli.emax,
        precision: cli.precision,
        budget: cli.budget,
        timing: cli.timing,
    };
    let report = match run_text(&text, Some(kind), &flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(1);
        }
    };
    let out = emit(&report, cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{out}"),
    }
    ExitCode::from(exit_code(&report) as u8)
}
