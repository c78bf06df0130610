//! `dicke`: ground state, phase structure, and exceptional points of N
//! three-level atoms coupled to a single cavity mode.

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dicke::model::GaugeKind;
use dicke::sweep::{self, SweepError};
use dicke::variational;
use serde_json::json;

mod config;
mod edcmd;
mod figures;
mod output;
mod verify;

use config::{parse_angle, ParamFlags, RunConfig};

/// Command failure carrying its exit code.
///
/// The contract is fixed so CI can gate on it: 0 ok, 2 validation,
/// 3 budget, 4 every comparison row failed, 5 invariant violation.
/// 1 is reserved for I/O and other unexpected failures.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Validation(String),
    Budget(String),
    AllRowsFailed(String),
    InvariantFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
            CliError::AllRowsFailed(_) => 4,
            CliError::InvariantFailed(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m)
            | CliError::Validation(m)
            | CliError::Budget(m)
            | CliError::AllRowsFailed(m)
            | CliError::InvariantFailed(m) => f.write_str(m),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(err: SweepError) -> Self {
        match err {
            SweepError::Invalid { .. } => CliError::Validation(err.to_string()),
            SweepError::BudgetExceeded { .. } | SweepError::EdBudgetExceeded { .. } => {
                CliError::Budget(err.to_string())
            }
        }
    }
}

fn parse_angle_flag(s: &str) -> Result<f64, String> {
    parse_angle(s)
}

#[derive(Parser)]
#[command(
    name = "dicke",
    version,
    about = "Variational ground state, phase diagrams, and exceptional points of N three-level atoms in a single-mode cavity"
)]
struct Cli {
    /// TOML run configuration; command-line flags override file values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single parameter point and print the ground state.
    Point(PointArgs),
    /// Generate a named dataset (fig2..fig10) as CSV files plus a JSON sidecar.
    Figure(FigureArgs),
    /// Compare the variational bound against exact diagonalization.
    Ed(EdArgs),
    /// Run randomized invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Coupling form: coulomb, dipole, unified, non-hermitian-unified.
    #[arg(long)]
    gauge: Option<GaugeKind>,
    /// Detuning ratio omega/splitting; defaults to 1 (resonance) when
    /// neither --eta nor --omega is given.
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Cavity frequency; eta is derived as omega/splitting.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Atomic level splitting, the energy unit (default 1).
    #[arg(long, allow_negative_numbers = true)]
    splitting: Option<f64>,
    /// Collective coupling strength G (default 0).
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Atom count N (default 1).
    #[arg(long)]
    n: Option<u32>,
    /// Field phase in radians, or one of pi/6, pi/4, pi/3, pi/2.
    #[arg(long, value_parser = parse_angle_flag, allow_hyphen_values = true)]
    phi: Option<f64>,
}

impl ParamArgs {
    fn flags(&self) -> ParamFlags {
        ParamFlags {
            gauge: self.gauge,
            eta: self.eta,
            omega: self.omega,
            splitting: self.splitting,
            g: self.g,
            n: self.n,
            phi: self.phi,
        }
    }
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Print the solution as JSON instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FigureArgs {
    /// Dataset id, one of fig2 .. fig10.
    id: String,
    /// Output directory, created if missing (default: current directory).
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Points per axis (default 201).
    #[arg(long)]
    points: Option<usize>,
    /// Atom count; per-atom observables do not depend on it (default 1).
    #[arg(long)]
    n: Option<u32>,
    /// Grid-cell budget (default 1000000).
    #[arg(long)]
    max_cells: Option<usize>,
}

#[derive(Args)]
struct EdArgs {
    /// Coupling form: coulomb, dipole, unified.
    #[arg(long)]
    gauge: Option<GaugeKind>,
    /// Detuning ratio omega/splitting; defaults to 1 (resonance).
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Cavity frequency; eta is derived as omega/splitting.
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Atomic level splitting, the energy unit (default 1).
    #[arg(long, allow_negative_numbers = true)]
    splitting: Option<f64>,
    /// Collective coupling strength G (default 0).
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Field phase in radians, or one of pi/6, pi/4, pi/3, pi/2.
    #[arg(long, value_parser = parse_angle_flag, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Comma-separated atom counts, e.g. 2,4,8 (default 2,4,8).
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    /// Per-atom energy tolerance for the cutoff doubling (default 1e-8).
    #[arg(long)]
    tol: Option<f64>,
    /// Output CSV path; the JSON sidecar is written next to it
    /// (default ed_compare.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory receiving a Matrix Market dump of each converged
    /// Hamiltonian.
    #[arg(long, value_name = "DIR")]
    dump_matrix: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite scope: all, gauge-reduction, resonance, berry, offdiag, ep.
    #[arg(default_value = "all")]
    scope: String,
    /// Samples per suite (default 200).
    #[arg(long)]
    samples: Option<u32>,
    /// RNG seed for sample generation.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config::load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Point(args) => run_point(&cfg, &args),
        Command::Figure(args) => run_figure(&cfg, &args),
        Command::Ed(args) => edcmd::run(&cfg, edcmd::EdFlags {
            gauge: args.gauge,
            eta: args.eta,
            omega: args.omega,
            splitting: args.splitting,
            g: args.g,
            phi: args.phi,
            n_values: args.n,
            tol: args.tol,
            out: args.out,
            dump_matrix: args.dump_matrix,
        }),
        Command::Verify(args) => run_verify(&cfg, &args),
    }
}

fn run_point(cfg: &RunConfig, args: &PointArgs) -> Result<(), CliError> {
    let eff = config::resolve_params(cfg, &args.params.flags())?;
    let p = &eff.params;
    let g_c = variational::critical_coupling(eff.gauge, p);
    let ground = variational::solve_ground_state(eff.gauge, p);
    let unstable = variational::unstable_superradiant(eff.gauge, p);

    if args.json {
        let body = json!({
            "gauge": eff.gauge.label(),
            "params": {
                "eta": p.eta,
                "omega": p.omega,
                "splitting": p.splitting,
                "g": p.g,
                "n": p.n_atoms,
                "phi": p.phi,
            },
            "phase_factor": p.phase_factor(),
            "critical_coupling": g_c,
            "ground": output::solution_json(&ground),
            "unstable": unstable.as_ref().map(output::solution_json),
        });
        println!("{}", output::pretty_json(&body)?);
        return Ok(());
    }

    println!("gauge: {}", eff.gauge);
    println!("eta: {} (omega = {}, splitting = {})", p.eta, p.omega, p.splitting);
    println!("G: {} (critical coupling G_c = {g_c})", p.g);
    println!("N: {}", p.n_atoms);
    println!("phi: {} (Phi = {})", p.phi, p.phase_factor());
    println!("phase: {}", ground.phase);
    println!("energy per atom: {}", output::complex_display(ground.energy));
    println!("photons per atom (n_p): {}", ground.n_p);
    println!("field amplitude (gamma_c): {}", ground.gamma_c);
    println!("population imbalance (delta_n_a): {}", ground.delta_na);
    println!("geometric phase per atom: {}", ground.berry_per_atom);
    println!("curvature at the stationary point: {}", ground.stability);
    if let Some(u) = unstable {
        println!("coexisting unstable branch:");
        println!("  photons per atom (n_p): {}", u.n_p);
        println!("  energy per atom: {}", output::complex_display(u.energy));
        println!("  population imbalance (delta_n_a): {}", u.delta_na);
        println!("  curvature: {}", u.stability);
    }
    Ok(())
}

fn run_figure(cfg: &RunConfig, args: &FigureArgs) -> Result<(), CliError> {
    let run = figures::FigureRun {
        out_dir: args
            .out_dir
            .clone()
            .or_else(|| cfg.figure.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        points: args.points.or(cfg.figure.points).unwrap_or(sweep::DEFAULT_POINTS),
        n_atoms: args.n.unwrap_or(1),
        budget: args.max_cells.or(cfg.figure.max_cells).unwrap_or(sweep::DEFAULT_CELL_BUDGET),
    };
    let written = figures::run_figure(&args.id, &run)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<(), CliError> {
    let samples = args.samples.or(cfg.verify.samples).unwrap_or(verify::DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(CliError::Validation("--samples: must be at least 1".to_string()));
    }
    let seed = args.seed.or(cfg.verify.seed).unwrap_or(verify::DEFAULT_SEED);
    let reports = verify::run_scope(&args.scope, samples, seed)?;
    for rep in &reports {
        println!(
            "[verify] {}: {}/{} pass, worst residual {:.3e} (tolerance {:.1e})",
            rep.name, rep.passed, rep.samples, rep.worst, rep.tolerance
        );
    }
    if let Some(fail) = reports.iter().find(|r| r.passed < r.samples) {
        let detail = fail.first_failure.as_deref().unwrap_or("none recorded");
        return Err(CliError::InvariantFailed(format!(
            "invariant '{}' failed on {} of {} samples; first failing sample: {detail}",
            fail.name,
            fail.samples - fail.passed,
            fail.samples
        )));
    }
    Ok(())
}
