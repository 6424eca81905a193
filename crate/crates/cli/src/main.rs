//! `nonscatter`: scenario-driven front end for the nonscattering laboratory.
//!
//! Exit codes: 0 success (scattering verdict or completed table), 2
//! configuration error, 3 inconclusive verdict, 4 no saddle or no admissible
//! contour, 5 numerical failure.

mod commands;
mod scenario;

use clap::{Args, Parser, Subcommand};
use commands::{CliError, Context, Status};
use nonscatter_core::Execution;
use scenario::Scenario;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nonscatter",
    version,
    about = "Helmholtz nonscattering diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Saddle, contour and asymptotic constants; writes report.json.
    Analyze(Common),
    /// resid(λ) sweep; writes sweep.csv and sweep_summary.json.
    Sweep(Common),
    /// Level set of Re g through the saddle; writes CSV and SVG.
    Levelset(Common),
    /// Unit-disk closed forms and nonscattering wavenumbers.
    Disk(Common),
    /// Corner law λ²(I₁+I₂) → C; writes corner.csv and corner.json.
    Corner(Common),
    /// Boundary integral against the area integral; writes oracle.csv.
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the scenario's "output").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Starting trapezoid nodes or nodes per Gauss panel.
    #[arg(long)]
    nodes: Option<usize>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

/// Honour NONSCATTER_THREADS; a value of 1 runs sequentially.
fn execution() -> Result<Execution, CliError> {
    let Ok(raw) = std::env::var("NONSCATTER_THREADS") else {
        return Ok(Execution::Parallel);
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "NONSCATTER_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if n == 1 {
        return Ok(Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(Execution::Parallel)
}

type Handler = fn(&Scenario, &Context) -> Result<Status, CliError>;

fn run(cli: Cli) -> Result<Status, CliError> {
    let (cmd, common): (Handler, Common) = match cli.command {
        Command::Analyze(c) => (commands::cmd_analyze, c),
        Command::Sweep(c) => (commands::cmd_sweep, c),
        Command::Levelset(c) => (commands::cmd_levelset, c),
        Command::Disk(c) => (commands::cmd_disk, c),
        Command::Corner(c) => (commands::cmd_corner, c),
        Command::Oracle(c) => (commands::cmd_oracle, c),
    };
    let text = std::fs::read_to_string(&common.config).map_err(|source| CliError::Io {
        path: common.config.clone(),
        source,
    })?;
    let sc = Scenario::parse(&text)?;
    let ctx = Context {
        out: commands::output_dir(common.out.as_deref(), &sc),
        nodes: common.nodes,
        tol: common.tol,
        exec: execution()?,
    };
    ctx.prepare()?;
    ctx.write("scenario.json", &sc.to_json())?;
    cmd(&sc, &ctx)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
