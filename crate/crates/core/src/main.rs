use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cv_metrology::cli::{self, Command, Format, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "cv-metrology",
    version,
    about = "Gaussian two-phase interferometer metrology"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// QFI, Uhlmann curvature, R, scalar bounds and sloppiness at one configuration
    Eval(Run),
    /// Grid scan of an objective
    Scan(Run),
    /// Landmark search or custom optimisation
    Optimize(Run),
    /// Closed forms against the numeric pipeline
    Compare(Run),
}

#[derive(Args)]
struct Run {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutFormat>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let parsed = match Cli::try_parse() {
        Ok(p) => p,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (command, run) = match parsed.command {
        Sub::Eval(r) => (Command::Eval, r),
        Sub::Scan(r) => (Command::Scan, r),
        Sub::Optimize(r) => (Command::Optimize, r),
        Sub::Compare(r) => (Command::Compare, r),
    };
    let format = run.format.map(|f| match f {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    });
    let code = cli::execute(
        command,
        &run.config,
        run.out.as_deref(),
        format,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
