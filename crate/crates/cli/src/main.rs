//! `swarmplan`: plan obstacle-free paths for a UAV formation and benchmark
//! the planner against reference algorithms.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid scenario or arguments,
//! 3 infeasible planning problem or result.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use swarmplan_core::harness::{self, Algorithm, BudgetMode, HarnessParams};
use swarmplan_core::scenario::{load_scenario_file, ScenarioFile};
use swarmplan_core::{Error, MutationScale};

#[derive(Parser)]
#[command(
    name = "swarmplan",
    version,
    about = "Formation path planning for UAV groups",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a scenario file, validate it, and print a summary.
    Validate {
        #[arg(long, value_name = "FILE")]
        scenario: PathBuf,
    },
    /// Plan a formation path and write all artifacts (report, convergence
    /// trace, path geometry, mission waypoint files).
    Plan {
        #[command(flatten)]
        run: RunArgs,
        /// Output directory for the artifacts.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Run several algorithms over several seeds on one scenario and write a
    /// comparison report with per-run convergence traces.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Comma-separated algorithms to compare.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "ga,tlbo,theta-pso,ftlbo"
        )]
        algorithms: Vec<String>,
        /// Number of seeds; runs use seed, seed+1, ..., seed+N-1.
        #[arg(long, value_name = "N", default_value_t = 20)]
        seeds: u64,
        /// Effort parity across algorithms: `evaluations` grants everyone the
        /// evaluation count FTLBO uses; `iterations` runs equal iterations.
        #[arg(long, default_value = "evaluations")]
        budget: String,
    },
    /// Plan and write only the per-UAV mission waypoint files.
    Export {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

/// Flags shared by every run-producing subcommand. Unset flags fall back to
/// the scenario file's `[optimizer]` section, then to built-in defaults.
#[derive(Args)]
struct RunArgs {
    #[arg(long, value_name = "FILE")]
    scenario: PathBuf,
    /// Base random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Population (class) size.
    #[arg(long)]
    pop: Option<usize>,
    /// Iteration count.
    #[arg(long)]
    iters: Option<usize>,
    /// Learning subjects per student (default: one per waypoint).
    #[arg(long)]
    subjects: Option<usize>,
    /// Chaotic mutation step as a fraction of each axis range.
    #[arg(long, value_name = "FRACTION")]
    mutation_scale: Option<f64>,
    /// Score obstacle clearance on every UAV's own path, not just the
    /// formation centroid's.
    #[arg(long)]
    strict_per_uav_safety: bool,
}

impl RunArgs {
    fn load(&self) -> Result<(ScenarioFile, HarnessParams, u64), Error> {
        let text = fs::read_to_string(&self.scenario)?;
        let file = load_scenario_file(&text)?;
        let mut params = HarnessParams::from_defaults(&file.optimizer);
        if let Some(pop) = self.pop {
            params.population = pop;
        }
        if let Some(iters) = self.iters {
            params.iterations = iters;
        }
        if self.subjects.is_some() {
            params.subjects = self.subjects;
        }
        if let Some(fraction) = self.mutation_scale {
            params.mutation_scale = MutationScale::FractionOfRange(fraction);
        }
        params.strict_per_uav_safety = self.strict_per_uav_safety;
        let seed = self.seed.unwrap_or(file.optimizer.seed);
        Ok((file, params, seed))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Io(_) => ExitCode::from(1),
        Error::EndpointInsideObstacle { .. } => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

const INFEASIBLE: u8 = 3;

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate { scenario } => {
            let text = fs::read_to_string(&scenario)?;
            let file = load_scenario_file(&text)?;
            print_validation(&file);
            Ok(ExitCode::SUCCESS)
        }
        Command::Plan { run, out } => {
            let (file, params, seed) = run.load()?;
            let outcome = harness::plan(&file, &params, seed, &out)?;
            println!(
                "plan: seed {seed}, {} evaluations in {:.1} s",
                outcome.evaluations,
                outcome.wall_time_ms / 1e3
            );
            println!(
                "cost: total {:.4} (length {:.4}, safety {:.6}, task {:.4})",
                outcome.cost.total, outcome.cost.length, outcome.cost.safety, outcome.cost.task
            );
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            if outcome.feasible {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("plan is infeasible: best path still violates an obstacle");
                Ok(ExitCode::from(INFEASIBLE))
            }
        }
        Command::Compare {
            run,
            out,
            algorithms,
            seeds,
            budget,
        } => {
            let (file, params, base_seed) = run.load()?;
            let algorithms = algorithms
                .iter()
                .map(|s| s.parse::<Algorithm>())
                .collect::<Result<Vec<_>, _>>()?;
            let budget_mode: BudgetMode = budget.parse()?;
            let seed_list: Vec<u64> = (base_seed..base_seed + seeds).collect();
            let outcome =
                harness::compare(&file, &algorithms, &seed_list, budget_mode, &params, &out)?;
            let total_ms: f64 = outcome.report.runs.iter().map(|r| r.wall_time_ms).sum();
            println!(
                "compare: {} runs ({} algorithms x {} seeds), budget mode {}, {:.1} s of optimizer time",
                outcome.report.runs.len(),
                algorithms.len(),
                seed_list.len(),
                outcome.report.budget_mode,
                total_ms / 1e3
            );
            print!("{}", outcome.summary);
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { run, out } => {
            let (file, params, seed) = run.load()?;
            let outcome = harness::export_missions(&file, &params, seed, &out)?;
            if outcome.feasible {
                for path in &outcome.written {
                    println!("wrote {}", path.display());
                }
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("no waypoint files written: best path is infeasible");
                Ok(ExitCode::from(INFEASIBLE))
            }
        }
    }
}

fn print_validation(file: &ScenarioFile) {
    let s = &file.scenario;
    println!("scenario ok");
    println!(
        "  area: x [{:.2}, {:.2}] m, y [{:.2}, {:.2}] m, z [{:.2}, {:.2}] m",
        s.lower_bound.x, s.upper_bound.x, s.lower_bound.y, s.upper_bound.y, s.lower_bound.z,
        s.upper_bound.z
    );
    match s.origin {
        Some(origin) => println!(
            "  origin: {:.7} N, {:.7} E (mission export available)",
            origin.latitude, origin.longitude
        ),
        None => println!("  origin: none (mission export unavailable)"),
    }
    println!(
        "  route: ({:.2}, {:.2}, {:.2}) -> ({:.2}, {:.2}, {:.2}), {} waypoints",
        s.start.x, s.start.y, s.start.z, s.goal.x, s.goal.y, s.goal.z, s.waypoint_count
    );
    println!(
        "  altitude band: [{:.2}, {:.2}] m; weights: length {}, safety {}, task {}",
        s.h_min, s.h_max, s.weights.length, s.weights.safety, s.weights.task
    );
    println!("  obstacles: {}", s.obstacles.len());
    println!("  formation: {} UAV(s)", file.formation.uav_count());
    let rules = swarmplan_core::formation::check_formation_rules(&file.formation, 1e-9);
    println!(
        "  formation rules: max radius error {:.3e} m, max neighbor mismatch {:.3e} m (reference radius {:.3} m)",
        rules.max_radius_error, rules.max_neighbor_mismatch, rules.radius_reference
    );
    println!(
        "  optimizer defaults: pop {}, iters {}, seed {}",
        file.optimizer.population, file.optimizer.iterations, file.optimizer.seed
    );
}
