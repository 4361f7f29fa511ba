//! `spectra-forge`: list the cataloged systems, solve their spectra, sample
//! structure functions and run the verification suites.

mod commands;
mod config;
mod error;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{Format, PhiRequest, Selector, SuiteSizes};
use config::{Overrides, RunConfig, DEFAULT_SEED};
use error::{CliError, EXIT_INVALID_INPUT};
use spectra_forge::models::ModelId;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment variable capping the worker threads (0 = automatic).
const THREADS_ENV: &str = "SPECTRA_FORGE_THREADS";

#[derive(Parser)]
#[command(name = "spectra-forge", version, about = "Structure functions, spectra and checks for superintegrable systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the cataloged models.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Solve the finite-dimensional representations for a range of p.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Last p of the range (defaults to --p).
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
    },
    /// Sample the structure function on a grid of x.
    Phi {
        #[command(flatten)]
        run: RunArgs,
        /// Which solution at --p to sample.
        #[arg(long, default_value_t = 0)]
        solution: usize,
        /// Sample at an explicit u (requires --energy).
        #[arg(long, allow_hyphen_values = true)]
        u: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        energy: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 31)]
        points: usize,
        /// Add the closed-form structure function as a third column.
        #[arg(long)]
        closed: bool,
    },
    /// Run verification suites and print a JSON report.
    Verify {
        #[arg(value_enum)]
        selector: SelectorArg,
        /// Restrict the suites to one model.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random tuples per suite (overrides each suite's default).
        #[arg(long)]
        tuples: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: Option<String>,
    /// Parameter overrides `k=v[,k=v...]`; repeatable.
    #[arg(long = "set", allow_hyphen_values = true)]
    set: Vec<String>,
    /// Quantum-number assignments `k=v[,k=v...]`; repeatable.
    #[arg(long = "qn", allow_hyphen_values = true)]
    qn: Vec<String>,
    /// JSON config file (`"schema": 1`).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn overrides(&self, p_max: Option<usize>) -> Overrides {
        Overrides {
            model: self.model.clone(),
            set: self.set.clone(),
            qn: self.qn.clone(),
            config: self.config.clone(),
            p: self.p,
            p_max,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelectorArg {
    Odes,
    Ladders,
    Oracle,
    Duality,
    All,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be a non-negative integer, got `{raw}`")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::List { json } => commands::list(json, out),
        Command::Solve { run, p_max, format, json } => {
            let cfg = RunConfig::resolve(&run.overrides(p_max))?;
            let format = match (json, format) {
                (true, _) | (_, OutputFormat::Json) => Format::Json,
                (_, OutputFormat::Csv) => Format::Csv,
                (_, OutputFormat::Table) => Format::Table,
            };
            commands::solve(&cfg, format, out, diag)
        }
        Command::Phi {
            run,
            solution,
            u,
            energy,
            x_min,
            x_max,
            points,
            closed,
        } => {
            let cfg = RunConfig::resolve(&run.overrides(None))?;
            let req = PhiRequest {
                solution,
                u,
                energy,
                x_min,
                x_max,
                points,
                closed,
            };
            commands::phi(&cfg, &req, out, diag)
        }
        Command::Verify {
            selector,
            model,
            seed,
            tuples,
        } => {
            let model = model.map(|m| m.parse::<ModelId>()).transpose()?;
            let selector = match selector {
                SelectorArg::Odes => Selector::Odes,
                SelectorArg::Ladders => Selector::Ladders,
                SelectorArg::Oracle => Selector::Oracle,
                SelectorArg::Duality => Selector::Duality,
                SelectorArg::All => Selector::All,
            };
            let mut sizes = SuiteSizes::default();
            if let Some(t) = tuples {
                sizes = SuiteSizes {
                    ode_tuples: t,
                    ladder_tuples: t,
                    oracle_sets: t,
                    duality_tuples: t,
                };
            }
            commands::verify(selector, model, seed, sizes, out, diag)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut diag = std::io::stderr();
    match run(cli, &mut out, &mut diag) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            let _ = writeln!(diag, "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
