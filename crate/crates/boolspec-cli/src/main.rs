//! `boolspec` — spectral analysis and query simulation for Boolean
//! functions, specialized to the addressed-parity family.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use boolspec_cli::{DEFAULT_GRID, LpOptions, exit_code, parse_grid};

#[derive(Parser)]
#[command(name = "boolspec", version, about = "Boolean-function spectral analysis and quantum query simulation", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LpArgs {
    /// Objective comparison tolerance for LP-derived quantities.
    #[arg(long, default_value_t = LpOptions::default().tol)]
    tol: f64,
    /// Largest function arity admitted to dense LP analyses.
    #[arg(long, default_value_t = LpOptions::default().guard_n)]
    guard_n: u32,
}

impl LpArgs {
    fn options(&self) -> LpOptions {
        LpOptions {
            tol: self.tol,
            guard_n: self.guard_n,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an addressed-parity instance: function, promise and layout files.
    Gen {
        /// Address bits (and targets) per block.
        ell: u32,
        /// Outer arity; the instance has k/2 blocks.
        k: u32,
        /// Directory receiving function.json, promise.json and layout.json.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Analyze a function file: spectrum statistics, approximate degree and
    /// approximate spectral norm with witnesses.
    Analyze {
        /// Function file to analyze.
        #[arg(long)]
        input: PathBuf,
        /// Error target for the approximate spectral norm.
        #[arg(long, default_value_t = 1.0 / 3.0)]
        eps: f64,
        /// Error target for the approximate degree.
        #[arg(long, default_value_t = 0.99)]
        eps_degree: f64,
        #[command(flatten)]
        lp: LpArgs,
        /// Directory receiving report.json and the witness files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the quantum query algorithm on a generated instance,
    /// exhaustively or on one input.
    Simulate {
        /// Function file (total or promise form).
        function: PathBuf,
        /// Layout sidecar describing the block structure.
        layout: PathBuf,
        /// Single input as a sign string like '+-++' (default: exhaustive).
        #[arg(long)]
        input: Option<String>,
        /// Directory receiving report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the composition lower bound for an instance.
    Liftcheck {
        /// Address bits (and targets) per block.
        ell: u32,
        /// Outer arity; the instance has k/2 blocks.
        k: u32,
        #[command(flatten)]
        lp: LpArgs,
        /// Directory receiving report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a grid of instances into a CSV comparison table.
    Sweep {
        /// Grid as comma-separated LxK cells.
        #[arg(long, default_value = DEFAULT_GRID)]
        grid: String,
        #[command(flatten)]
        lp: LpArgs,
        /// File receiving the CSV (also printed).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> boolspec::Result<String> {
    match cli.command {
        Command::Gen { ell, k, out } => boolspec_cli::cmd_gen(ell, k, &out),
        Command::Analyze {
            input,
            eps,
            eps_degree,
            lp,
            out,
        } => boolspec_cli::cmd_analyze(&input, eps, eps_degree, &lp.options(), out.as_deref()),
        Command::Simulate {
            function,
            layout,
            input,
            out,
        } => boolspec_cli::cmd_simulate(&function, &layout, input.as_deref(), out.as_deref()),
        Command::Liftcheck { ell, k, lp, out } => {
            boolspec_cli::cmd_liftcheck(ell, k, &lp.options(), out.as_deref())
        }
        Command::Sweep { grid, lp, out } => {
            let grid = parse_grid(&grid)?;
            boolspec_cli::cmd_sweep(&grid, &lp.options(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
