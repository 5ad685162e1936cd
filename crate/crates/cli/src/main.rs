//! `hullcert`: certificates, bounds and sample suites from the command line.

mod commands;
mod input;
mod report;
mod suite;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::input::CliError;

#[derive(Parser)]
#[command(
    name = "hullcert",
    version,
    about = "Exact interval certificates for graph-quadratic convex hulls"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// Where the graph and point come from.
#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Instance JSON: {"graph": {...}, "x": [...]}.
    #[arg(long, conflicts_with_all = ["graph", "wheel", "split", "complete"])]
    pub instance: Option<PathBuf>,
    /// Graph JSON file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Wheel with this many rim vertices (hub last).
    #[arg(long)]
    pub wheel: Option<usize>,
    /// Complete split graph, written `N1xN2`.
    #[arg(long)]
    pub split: Option<String>,
    /// Complete graph on this many vertices.
    #[arg(long)]
    pub complete: Option<usize>,
    /// Point, as comma-separated decimals or p/q tokens.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound of a relaxation at x.
    Lb {
        #[command(flatten)]
        instance: InstanceArgs,
        /// mccormick, mccormick_full, triangle, split, odd_wheel or default.
        #[arg(long, default_value = "default")]
        relaxation: String,
    },
    /// Lower envelope of f at x from the hypercube vertices.
    Envelope {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Lift the vertex-count guard of the oracle.
        #[arg(long)]
        allow_large: bool,
    },
    /// Even-wheel certificate; x lists the rim then the hub.
    WheelCert {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Also write the bare certificate, readable by `verify`.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Complete-split certificate; x lists the clique then the independent side.
    SplitCert {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Check a certificate file.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// The two five-wheel points beyond the triangle relaxation.
    FiveWheel,
    /// Seeded random suites with triple-equality checks.
    Suite(suite::SuiteArgs),
}

fn run(cli: Cli) -> Result<report::Report, CliError> {
    match cli.command {
        Command::Lb { instance, relaxation } => commands::lb(&instance, &relaxation),
        Command::Envelope { instance, allow_large } => commands::envelope(&instance, allow_large),
        Command::WheelCert { x, cert_out } => commands::wheel_cert(&x, cert_out.as_deref()),
        Command::SplitCert { n1, n2, x, cert_out } => commands::split_cert(n1, n2, &x, cert_out.as_deref()),
        Command::Verify { cert } => commands::verify(&cert),
        Command::FiveWheel => Ok(commands::five_wheel()),
        Command::Suite(args) => suite::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.out.clone();
    let report = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hullcert: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("hullcert: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            // a closed pipe is the reader's choice, not a failure
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}
