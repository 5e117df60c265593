//! `gptsim`: simulability of observables in general probabilistic theories.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gpt_sim::numerics::Tolerance;

mod commands;
mod report;

use report::{CmdResult, Failure, Format, Mode, RunConfig};

#[derive(Parser)]
#[command(name = "gptsim", version, about = "Simulability of observables in general probabilistic theories")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Arithmetic: exact rationals or tolerance-based floats.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,

    /// Sets all three tolerances (rank, feasibility, comparison).
    #[arg(long, global = true, default_value_t = 1e-9)]
    eps: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for every random corpus.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,

    /// Worker threads for enumeration and corpus checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Largest subset size tried by `sim smin`.
    #[arg(long = "k-max", global = true, default_value_t = gpt_sim::simulation::DEFAULT_K_MAX)]
    k_max: usize,

    /// Fibonacci directions added to the polyhedral Bloch-ball cones.
    #[arg(long, global = true, default_value_t = 128)]
    facets: usize,

    /// Record wall-clock time in the output (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// State space files.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Simulation questions on observables.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Regular polygon theories.
    #[command(subcommand)]
    Polygon(PolygonCmd),
    /// Qubit examples.
    #[command(subcommand)]
    Qubit(QubitCmd),
    /// Run the acceptance checks: `all` or one criterion id.
    Reproduce {
        #[arg(default_value = "all")]
        which: String,
    },
}

#[derive(Subcommand)]
pub enum SpaceCmd {
    /// Check normalization, spanning and extremality of the states.
    Validate { file: PathBuf },
    /// Extreme rays of the effect cone.
    Rays { file: PathBuf },
}

#[derive(Subcommand)]
pub enum SimCmd {
    /// Is the target simulable from the simulators?
    Check {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        simulators: PathBuf,
        /// Replay a certificate (or a previous report) instead of solving.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Is the target simulation irreducible?
    Irreducible {
        #[arg(long)]
        target: PathBuf,
        /// State space; qubit observables default to the Bloch ball.
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Split the target into simulation-irreducible observables.
    Decompose {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Smallest subset of the pool that simulates every target.
    Smin {
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        pool: PathBuf,
    },
    /// Largest trivial weight in a convex decomposition of the target.
    Noise {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum PolygonCmd {
    /// States, named effects and generating dichotomic observables.
    Build {
        #[arg(long)]
        n: usize,
    },
    /// Catalog of simulation-irreducible observables.
    Irreducibles {
        #[arg(long)]
        n: usize,
    },
    /// Catalog sizes against the closed-form counts for n = 3..=n_max.
    Counts {
        #[arg(long = "n-max", default_value_t = 16)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
pub enum QubitCmd {
    /// Octahedron test `|e0| + |e|_1 <= 1` per effect.
    Octahedron {
        #[arg(long)]
        obs: PathBuf,
        /// Shrink the observable towards white noise first.
        #[arg(long)]
        t: Option<f64>,
    },
    /// Inner and outer bounds on the compatibility threshold of dichotomic targets.
    CompatBracket {
        /// Axis letters such as `xyz`, or a file of observables.
        #[arg(long)]
        targets: String,
    },
    /// Every named qubit observable.
    Suite {
        #[arg(long, default_value_t = 0.5)]
        t: f64,
    },
}

fn run(cli: Cli, command_echo: &[String]) -> CmdResult<(String, u8)> {
    let g = &cli.global;
    if !(g.eps.is_finite() && g.eps >= 0.0) {
        return Err(Failure::Input(format!("--eps must be finite and non-negative, got {}", g.eps)));
    }
    if g.jobs == 0 {
        return Err(Failure::Input("--jobs must be at least 1".into()));
    }
    let cfg = RunConfig {
        mode: g.mode,
        tol: Tolerance::uniform(g.eps)?,
        format: g.format,
        seed: g.seed,
        jobs: g.jobs,
        k_max: g.k_max,
        facets: g.facets,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Failure::Input(e.to_string()))?;
    let start = Instant::now();
    let report = pool.install(|| match cli.command {
        Command::Space(c) => commands::space(c, &cfg),
        Command::Sim(c) => commands::sim(c, &cfg),
        Command::Polygon(c) => commands::polygon(c, &cfg),
        Command::Qubit(c) => commands::qubit(c, &cfg),
        Command::Reproduce { which } => commands::reproduce(&which, &cfg),
    })?;
    let elapsed = g.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    Ok((report::render(&report, command_echo, &cfg, elapsed)?, report.exit))
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli, &echo) {
        Ok((out, exit)) => {
            print!("{out}");
            ExitCode::from(exit)
        }
        Err(f) => {
            eprintln!("gptsim: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
