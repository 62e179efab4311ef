//! Run orchestration and artifact export: single planning runs, multi-seed
//! multi-algorithm comparisons under budget parity, and the files both write.
//!
//! Artifacts are fully reproducible: a fixed seed and scenario produce
//! byte-identical files regardless of how many threads execute the runs.
//! Wall-clock timings are therefore reported on stdout only, never serialized.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::baselines::{run_ga, run_theta_pso, GaParams, ThetaPsoParams};
use crate::error::{Error, Result};
use crate::fitness::{CostBreakdown, EvaluationContext};
use crate::formation::{
    check_formation_rules, derive_uav_paths, CentroidPath, FormationRuleReport,
};
use crate::geo::LocalPoint;
use crate::optimizer::{
    ftlbo_evaluation_budget, run_ftlbo, run_tlbo, ConvergenceRecord, FtlboParams, MutationScale,
    RunOutcome, StopCondition, TlboParams,
};
use crate::scenario::{Obstacle, OptimizerDefaults, ScenarioFile};
use crate::waypoints::{export_waypoints, WaypointFormat};

/// The algorithms the harness can run and compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ga,
    Tlbo,
    ThetaPso,
    Ftlbo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Ga,
        Algorithm::Tlbo,
        Algorithm::ThetaPso,
        Algorithm::Ftlbo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ga => "ga",
            Algorithm::Tlbo => "tlbo",
            Algorithm::ThetaPso => "theta-pso",
            Algorithm::Ftlbo => "ftlbo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(Algorithm::Ga),
            "tlbo" => Ok(Algorithm::Tlbo),
            "theta-pso" | "theta_pso" | "thetapso" => Ok(Algorithm::ThetaPso),
            "ftlbo" => Ok(Algorithm::Ftlbo),
            other => Err(Error::UnknownAlgorithm(other.to_owned())),
        }
    }
}

/// Fully resolved run parameters for every algorithm the harness drives.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessParams {
    pub population: usize,
    pub iterations: usize,
    /// Learning subjects for FTLBO; defaults to one per waypoint.
    pub subjects: Option<usize>,
    pub mutation_scale: MutationScale,
    pub straight_line_seed: bool,
    pub strict_per_uav_safety: bool,
    pub ga_crossover_rate: f64,
    pub ga_mutation_rate: f64,
    pub ga_tournament_size: usize,
    pub pso_inertia: f64,
    pub pso_cognitive: f64,
    pub pso_social: f64,
}

impl HarnessParams {
    pub fn from_defaults(d: &OptimizerDefaults) -> Self {
        let ga = GaParams::new(d.population, d.iterations, d.seed);
        let pso = ThetaPsoParams::new(d.population, d.iterations, d.seed);
        Self {
            population: d.population,
            iterations: d.iterations,
            subjects: d.subjects,
            mutation_scale: d.mutation_scale,
            straight_line_seed: d.straight_line_seed,
            strict_per_uav_safety: false,
            ga_crossover_rate: ga.crossover_rate,
            ga_mutation_rate: ga.mutation_rate,
            ga_tournament_size: ga.tournament_size,
            pso_inertia: pso.inertia,
            pso_cognitive: pso.cognitive,
            pso_social: pso.social,
        }
    }

    fn subjects_for(&self, ctx: &EvaluationContext) -> usize {
        self.subjects.unwrap_or(ctx.scenario.waypoint_count)
    }
}

/// Run one algorithm under a stop condition. FTLBO is iteration-driven; when
/// handed an evaluation budget it runs the largest iteration count that fits.
pub fn run_algorithm(
    ctx: &EvaluationContext,
    algorithm: Algorithm,
    seed: u64,
    params: &HarnessParams,
    stop: StopCondition,
) -> Result<RunOutcome> {
    match algorithm {
        Algorithm::Tlbo => run_tlbo(
            ctx,
            &TlboParams {
                population: params.population,
                stop,
                seed,
                straight_line_seed: params.straight_line_seed,
            },
        ),
        Algorithm::Ga => run_ga(
            ctx,
            &GaParams {
                population: params.population,
                stop,
                seed,
                crossover_rate: params.ga_crossover_rate,
                mutation_rate: params.ga_mutation_rate,
                tournament_size: params.ga_tournament_size,
            },
        ),
        Algorithm::ThetaPso => run_theta_pso(
            ctx,
            &ThetaPsoParams {
                population: params.population,
                stop,
                seed,
                inertia: params.pso_inertia,
                cognitive: params.pso_cognitive,
                social: params.pso_social,
            },
        ),
        Algorithm::Ftlbo => {
            let subjects = params.subjects_for(ctx);
            let iterations = match stop {
                StopCondition::Iterations(n) => n,
                StopCondition::Evaluations(budget) => {
                    let per_iteration =
                        params.population as u64 + 1 + (params.population * subjects) as u64;
                    (budget.saturating_sub(params.population as u64) / per_iteration) as usize
                }
            };
            run_ftlbo(
                ctx,
                &FtlboParams {
                    population: params.population,
                    iterations,
                    seed,
                    subjects: Some(subjects),
                    mutation_scale: params.mutation_scale,
                    straight_line_seed: params.straight_line_seed,
                },
            )
        }
    }
}

// ---------------------------------------------------------------------------
// Independent clearance verification
// ---------------------------------------------------------------------------

/// True when segment `ab` comes within `obs.radius` of the obstacle axis in
/// the ground plane. Written against the squared-distance quadratic on
/// purpose: export verification must not share code with the fitness routine
/// it double-checks.
pub fn segment_clearance_violated(a: LocalPoint, b: LocalPoint, obs: &Obstacle) -> bool {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let fx = a.x - obs.center.x;
    let fy = a.y - obs.center.y;
    let qa = dx * dx + dy * dy;
    let qb = 2.0 * (fx * dx + fy * dy);
    let qc = fx * fx + fy * fy;
    let d2 = if qa == 0.0 {
        qc
    } else {
        let t = (-qb / (2.0 * qa)).clamp(0.0, 1.0);
        (qa * t + qb) * t + qc
    };
    d2.sqrt() <= obs.radius
}

/// True when no segment of the node sequence violates any obstacle.
pub fn path_clear_of_obstacles(nodes: &[LocalPoint], obstacles: &[Obstacle]) -> bool {
    nodes.windows(2).all(|w| {
        obstacles
            .iter()
            .all(|obs| !segment_clearance_violated(w[0], w[1], obs))
    })
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

fn scenario_digest(raw: &str) -> String {
    hex::encode(Sha256::digest(raw.as_bytes()))
}

/// One `(algorithm, seed)` run in a comparison report.
#[derive(Debug, Clone, Serialize)]
pub struct RunEntry {
    pub algorithm: String,
    pub seed: u64,
    pub iterations: usize,
    pub evaluations: u64,
    pub feasible: bool,
    /// First iteration within 1% of the final best cost; absent when the run
    /// never reached a finite cost.
    pub iterations_to_within_1pct: Option<usize>,
    pub cost: CostBreakdown,
    /// Measured, not reproducible; printed but never serialized.
    #[serde(skip)]
    pub wall_time_ms: f64,
}

/// Per-algorithm summary statistics over all seeds.
#[derive(Debug, Clone, Serialize)]
pub struct AggregateEntry {
    pub algorithm: String,
    pub min_total: f64,
    pub median_total: f64,
    pub max_total: f64,
    pub median_iterations_to_within_1pct: Option<usize>,
    pub feasible_runs: usize,
    pub runs: usize,
}

/// The self-contained result of a comparison: every run, the aggregates, and
/// the exact scenario text that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub scenario_digest: String,
    pub budget_mode: String,
    /// Evaluation budget every algorithm was granted (parity mode only).
    pub budget_evaluations: Option<u64>,
    pub population: usize,
    pub iterations: usize,
    pub subjects: usize,
    pub seeds: Vec<u64>,
    pub runs: Vec<RunEntry>,
    pub aggregates: Vec<AggregateEntry>,
    pub scenario_config: String,
}

/// How a comparison equalizes effort across algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BudgetMode {
    /// Grant every algorithm the cumulative evaluation count an FTLBO run of
    /// the configured size consumes. Fair: FTLBO spends far more evaluations
    /// per iteration than the others.
    #[default]
    Evaluations,
    /// Run every algorithm for the same iteration count.
    Iterations,
}

impl BudgetMode {
    pub fn name(self) -> &'static str {
        match self {
            BudgetMode::Evaluations => "evaluations",
            BudgetMode::Iterations => "iterations",
        }
    }
}

impl FromStr for BudgetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "evaluations" => Ok(BudgetMode::Evaluations),
            "iterations" => Ok(BudgetMode::Iterations),
            other => Err(Error::invalid(
                "budget",
                format!("unknown mode `{other}` (expected iterations or evaluations)"),
            )),
        }
    }
}

fn median_by_total_order(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

fn aggregate(algorithm: Algorithm, entries: &[&RunEntry]) -> AggregateEntry {
    let mut totals: Vec<f64> = entries.iter().map(|e| e.cost.total).collect();
    let min_total = totals.iter().copied().fold(f64::INFINITY, f64::min);
    let max_total = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let median_total = median_by_total_order(&mut totals);
    let mut iters: Vec<usize> = entries
        .iter()
        .filter_map(|e| e.iterations_to_within_1pct)
        .collect();
    iters.sort_unstable();
    let median_iterations = if iters.is_empty() {
        None
    } else {
        Some(iters[iters.len() / 2])
    };
    AggregateEntry {
        algorithm: algorithm.name().to_owned(),
        min_total,
        median_total,
        max_total,
        median_iterations_to_within_1pct: median_iterations,
        feasible_runs: entries.iter().filter(|e| e.feasible).count(),
        runs: entries.len(),
    }
}

/// Render the aggregate table: per algorithm, min/median/max final cost and
/// the median iteration count to come within 1% of the final cost.
pub fn summary_table(aggregates: &[AggregateEntry]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<10} {:>10} {:>12} {:>10} {:>12} {:>9}\n",
        "algorithm", "min cost", "median cost", "max cost", "iters(1%)", "feasible"
    ));
    for a in aggregates {
        let iters = a
            .median_iterations_to_within_1pct
            .map_or_else(|| "-".to_owned(), |i| i.to_string());
        out.push_str(&format!(
            "{:<10} {:>10.2} {:>12.2} {:>10.2} {:>12} {:>6}/{}\n",
            a.algorithm, a.min_total, a.median_total, a.max_total, iters, a.feasible_runs, a.runs
        ));
    }
    out
}

fn convergence_csv(record: &ConvergenceRecord) -> String {
    let mut out = String::from("iteration,evaluations,best_total,mean_total\n");
    for s in record.samples() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.iteration, s.evaluations, s.best_total, s.mean_total
        ));
    }
    out
}

fn path_csv(nodes: &[LocalPoint]) -> String {
    let mut out = String::from("node,x,y,z\n");
    for (i, n) in nodes.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i, n.x, n.y, n.z));
    }
    out
}

fn write_file(written: &mut Vec<PathBuf>, path: PathBuf, content: &str) -> Result<()> {
    fs::write(&path, content)?;
    written.push(path);
    Ok(())
}

// ---------------------------------------------------------------------------
// plan
// ---------------------------------------------------------------------------

/// Everything a planning run produced, plus where it was written.
#[derive(Debug)]
pub struct PlanOutcome {
    pub feasible: bool,
    pub cost: CostBreakdown,
    pub centroid_path: CentroidPath,
    pub evaluations: u64,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub formation_rules: FormationRuleReport,
    pub written: Vec<PathBuf>,
}

/// A finished FTLBO planning run held in memory, before any file is written.
#[derive(Debug)]
pub struct PlannedPaths {
    pub outcome: RunOutcome,
    pub feasible: bool,
    pub centroid_path: CentroidPath,
    pub uav_paths: Vec<crate::formation::UavPath>,
    pub formation_rules: FormationRuleReport,
    pub subjects: usize,
    pub origin: Option<crate::geo::GeoPoint>,
    pub wall_time_ms: f64,
}

/// Run FTLBO on a scenario file and derive the per-UAV paths, verifying a
/// feasible plan against the independent clearance check. No files written.
pub fn plan_paths(file: &ScenarioFile, params: &HarnessParams, seed: u64) -> Result<PlannedPaths> {
    let ctx = EvaluationContext::new(file.scenario.clone(), file.formation.clone())?
        .with_strict_per_uav_safety(params.strict_per_uav_safety);
    let subjects = params.subjects_for(&ctx);

    let started = Instant::now();
    let outcome = run_ftlbo(
        &ctx,
        &FtlboParams {
            population: params.population,
            iterations: params.iterations,
            seed,
            subjects: Some(subjects),
            mutation_scale: params.mutation_scale,
            straight_line_seed: params.straight_line_seed,
        },
    )?;
    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;

    let feasible = outcome.best.cost.is_finite();
    let centroid_path = ctx.decode(&outcome.best.vector);
    let uav_paths = derive_uav_paths(&centroid_path, &ctx.formation);
    let formation_rules = check_formation_rules(&ctx.formation, 1e-9);

    // Export-time safety recheck, independent of the fitness code path: a
    // finite-cost plan must clear every obstacle.
    if feasible {
        assert!(
            path_clear_of_obstacles(&centroid_path.nodes(), &ctx.scenario.obstacles),
            "finite-cost plan violates an obstacle; fitness and geometry disagree"
        );
        if params.strict_per_uav_safety {
            for uav in &uav_paths {
                assert!(
                    path_clear_of_obstacles(&uav.nodes, &ctx.scenario.obstacles),
                    "finite-cost strict plan violates an obstacle on UAV {}",
                    uav.uav_index
                );
            }
        }
    }

    Ok(PlannedPaths {
        outcome,
        feasible,
        centroid_path,
        uav_paths,
        formation_rules,
        subjects,
        origin: ctx.scenario.origin,
        wall_time_ms,
    })
}

#[derive(Debug, Serialize)]
struct PlanReport<'a> {
    schema: &'static str,
    scenario_digest: String,
    algorithm: &'static str,
    seed: u64,
    population: usize,
    iterations: usize,
    subjects: usize,
    strict_per_uav_safety: bool,
    feasible: bool,
    evaluations: u64,
    iterations_to_within_1pct: Option<usize>,
    cost: CostBreakdown,
    formation_rules: &'a FormationRuleReport,
    scenario_config: &'a str,
}

/// Plan a formation path with FTLBO and write every artifact: the centroid
/// path, one path and (when a geodetic origin exists) one mission file per
/// UAV, the convergence trace, and a structured report.
///
/// Waypoint files are only written for feasible (finite-cost) plans.
pub fn plan(
    file: &ScenarioFile,
    params: &HarnessParams,
    seed: u64,
    out_dir: &Path,
) -> Result<PlanOutcome> {
    let planned = plan_paths(file, params, seed)?;
    let cost = planned.outcome.best.cost;

    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let report = PlanReport {
        schema: "swarmplan-plan-v1",
        scenario_digest: scenario_digest(&file.raw),
        algorithm: Algorithm::Ftlbo.name(),
        seed,
        population: params.population,
        iterations: params.iterations,
        subjects: planned.subjects,
        strict_per_uav_safety: params.strict_per_uav_safety,
        feasible: planned.feasible,
        evaluations: planned.outcome.record.final_sample().evaluations,
        iterations_to_within_1pct: planned.outcome.record.iterations_to_within(0.01),
        cost,
        formation_rules: &planned.formation_rules,
        scenario_config: &file.raw,
    };
    let report_text = toml::to_string(&report)
        .map_err(|e| Error::invalid("report", e.to_string()))?;
    write_file(&mut written, out_dir.join("plan_report.toml"), &report_text)?;
    write_file(
        &mut written,
        out_dir.join("convergence.csv"),
        &convergence_csv(&planned.outcome.record),
    )?;
    write_file(
        &mut written,
        out_dir.join("centroid_path.csv"),
        &path_csv(&planned.centroid_path.nodes()),
    )?;
    for uav in &planned.uav_paths {
        write_file(
            &mut written,
            out_dir.join(format!("uav_{}_path.csv", uav.uav_index)),
            &path_csv(&uav.nodes),
        )?;
    }
    if planned.feasible {
        if let Some(origin) = planned.origin {
            for uav in &planned.uav_paths {
                let text = export_waypoints(uav, origin, WaypointFormat::QgcWpl110)?;
                write_file(
                    &mut written,
                    out_dir.join(format!("uav_{}.waypoints", uav.uav_index)),
                    &text,
                )?;
            }
        }
    }

    Ok(PlanOutcome {
        feasible: planned.feasible,
        cost,
        centroid_path: planned.centroid_path,
        evaluations: planned.outcome.record.final_sample().evaluations,
        iterations: params.iterations,
        wall_time_ms: planned.wall_time_ms,
        formation_rules: planned.formation_rules,
        written,
    })
}

/// Plan and write only the per-UAV mission waypoint files. Requires the
/// scenario to carry a geodetic origin; an infeasible plan writes nothing and
/// is reported through `PlanOutcome::feasible` just like `plan`.
pub fn export_missions(
    file: &ScenarioFile,
    params: &HarnessParams,
    seed: u64,
    out_dir: &Path,
) -> Result<PlanOutcome> {
    let planned = plan_paths(file, params, seed)?;
    let origin = planned.origin.ok_or(Error::MissingOrigin)?;

    let mut written = Vec::new();
    if planned.feasible {
        fs::create_dir_all(out_dir)?;
        for uav in &planned.uav_paths {
            let text = export_waypoints(uav, origin, WaypointFormat::QgcWpl110)?;
            write_file(
                &mut written,
                out_dir.join(format!("uav_{}.waypoints", uav.uav_index)),
                &text,
            )?;
        }
    }

    Ok(PlanOutcome {
        feasible: planned.feasible,
        cost: planned.outcome.best.cost,
        centroid_path: planned.centroid_path,
        evaluations: planned.outcome.record.final_sample().evaluations,
        iterations: params.iterations,
        wall_time_ms: planned.wall_time_ms,
        formation_rules: planned.formation_rules,
        written,
    })
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// A finished comparison: the report (also written to disk) and the printable
/// summary table.
#[derive(Debug)]
pub struct CompareOutcome {
    pub report: RunReport,
    pub summary: String,
    pub written: Vec<PathBuf>,
}

/// Run every `(algorithm, seed)` pair and aggregate the results.
///
/// Under [`BudgetMode::Evaluations`] every algorithm receives the evaluation
/// count an FTLBO run of the configured size uses; under
/// [`BudgetMode::Iterations`] every algorithm runs the configured iteration
/// count. Runs execute in parallel; outputs are identical regardless of
/// thread count.
pub fn compare(
    file: &ScenarioFile,
    algorithms: &[Algorithm],
    seeds: &[u64],
    budget_mode: BudgetMode,
    params: &HarnessParams,
    out_dir: &Path,
) -> Result<CompareOutcome> {
    if algorithms.is_empty() {
        return Err(Error::invalid("algorithms", "need at least one"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid("seeds", "need at least one"));
    }

    let ctx = EvaluationContext::new(file.scenario.clone(), file.formation.clone())?
        .with_strict_per_uav_safety(params.strict_per_uav_safety);
    let subjects = params.subjects_for(&ctx);

    let budget = ftlbo_evaluation_budget(params.population, params.iterations, subjects);
    let stop_for = |algorithm: Algorithm| match budget_mode {
        BudgetMode::Iterations => StopCondition::Iterations(params.iterations),
        BudgetMode::Evaluations => match algorithm {
            Algorithm::Ftlbo => StopCondition::Iterations(params.iterations),
            _ => StopCondition::Evaluations(budget),
        },
    };

    let tasks: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| seeds.iter().map(move |&s| (a, s)))
        .collect();

    let results: Vec<Result<(RunOutcome, f64)>> = tasks
        .par_iter()
        .map(|&(algorithm, seed)| {
            let started = Instant::now();
            let outcome = run_algorithm(&ctx, algorithm, seed, params, stop_for(algorithm))?;
            Ok((outcome, started.elapsed().as_secs_f64() * 1e3))
        })
        .collect();

    fs::create_dir_all(out_dir.join("convergence"))?;
    let mut written = Vec::new();
    let mut runs = Vec::with_capacity(tasks.len());
    for ((algorithm, seed), result) in tasks.iter().zip(results) {
        let (outcome, wall_time_ms) = result?;
        let final_sample = outcome.record.final_sample();
        runs.push(RunEntry {
            algorithm: algorithm.name().to_owned(),
            seed: *seed,
            iterations: final_sample.iteration,
            evaluations: final_sample.evaluations,
            feasible: outcome.best.cost.is_finite(),
            iterations_to_within_1pct: outcome.record.iterations_to_within(0.01),
            cost: outcome.best.cost,
            wall_time_ms,
        });
        write_file(
            &mut written,
            out_dir
                .join("convergence")
                .join(format!("{}_seed{}.csv", algorithm.name(), seed)),
            &convergence_csv(&outcome.record),
        )?;
    }

    let aggregates: Vec<AggregateEntry> = algorithms
        .iter()
        .map(|&a| {
            let entries: Vec<&RunEntry> = runs
                .iter()
                .filter(|r| r.algorithm == a.name())
                .collect();
            aggregate(a, &entries)
        })
        .collect();

    let report = RunReport {
        schema: "swarmplan-compare-v1",
        scenario_digest: scenario_digest(&file.raw),
        budget_mode: budget_mode.name().to_owned(),
        budget_evaluations: match budget_mode {
            BudgetMode::Evaluations => Some(budget),
            BudgetMode::Iterations => None,
        },
        population: params.population,
        iterations: params.iterations,
        subjects,
        seeds: seeds.to_vec(),
        runs,
        aggregates,
        scenario_config: file.raw.clone(),
    };

    let report_text =
        toml::to_string(&report).map_err(|e| Error::invalid("report", e.to_string()))?;
    write_file(&mut written, out_dir.join("report.toml"), &report_text)?;
    let summary = summary_table(&report.aggregates);
    write_file(&mut written, out_dir.join("summary.txt"), &summary)?;

    Ok(CompareOutcome {
        report,
        summary,
        written,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::load_scenario_file;

    const SCENARIO: &str = r#"
        [area]
        lower = [0.0, 0.0, 0.0]
        upper = [100.0, 60.0, 12.0]
        origin = { latitude = 12.2331044, longitude = 109.1144313 }

        [altitude]
        min_m = 2.0
        max_m = 7.0

        [route]
        start = [5.0, 5.0, 4.0]
        goal = [85.0, 50.0, 4.0]
        waypoints = 4

        [[obstacle]]
        center = [45.0, 28.0]
        radius = 8.0

        [formation]
        count = 3
        offsets = [[0.0, 0.0, 2.0], [3.0, 0.0, -1.0], [-3.0, 0.0, -1.0]]

        [optimizer]
        population = 16
        iterations = 20
        seed = 9
    "#;

    #[test]
    fn algorithm_parsing_round_trips() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("THETA_PSO".parse::<Algorithm>().unwrap(), Algorithm::ThetaPso);
        assert!(matches!(
            "annealing".parse::<Algorithm>(),
            Err(Error::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn clearance_check_agrees_with_fitness_on_samples() {
        use crate::fitness::segment_obstacle_violation;
        let obs = Obstacle {
            center: LocalPoint::new(3.0, -1.0, 0.0),
            radius: 2.0,
        };
        let cases = [
            (LocalPoint::new(-5.0, 0.0, 1.0), LocalPoint::new(5.0, 0.0, 1.0)),
            (LocalPoint::new(-5.0, 4.0, 1.0), LocalPoint::new(5.0, 4.0, 1.0)),
            (LocalPoint::new(0.0, 0.0, 1.0), LocalPoint::new(0.0, 0.0, 9.0)),
            (LocalPoint::new(10.0, 10.0, 1.0), LocalPoint::new(11.0, 10.0, 1.0)),
        ];
        for (a, b) in cases {
            let infeasible = segment_obstacle_violation(a, b, &obs).is_infinite();
            assert_eq!(segment_clearance_violated(a, b, &obs), infeasible);
        }
    }

    #[test]
    fn plan_writes_reproducible_artifacts() {
        let file = load_scenario_file(SCENARIO).unwrap();
        let params = HarnessParams::from_defaults(&file.optimizer);
        let dir1 = tempfile::tempdir().unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let out1 = plan(&file, &params, 9, dir1.path()).unwrap();
        let out2 = plan(&file, &params, 9, dir2.path()).unwrap();
        assert!(out1.feasible);
        assert_eq!(out1.cost, out2.cost);
        assert_eq!(out1.written.len(), out2.written.len());
        for (a, b) in out1.written.iter().zip(out2.written.iter()) {
            assert_eq!(a.file_name(), b.file_name());
            assert_eq!(
                fs::read(a).unwrap(),
                fs::read(b).unwrap(),
                "artifact {:?} differs between identical runs",
                a.file_name()
            );
        }
        // 3 UAVs with a geodetic origin: report, convergence, centroid csv,
        // 3 path csvs, 3 waypoint files.
        assert_eq!(out1.written.len(), 9);
    }

    #[test]
    fn compare_reports_all_runs_and_aggregates() {
        let file = load_scenario_file(SCENARIO).unwrap();
        let params = HarnessParams::from_defaults(&file.optimizer);
        let dir = tempfile::tempdir().unwrap();
        let out = compare(
            &file,
            &Algorithm::ALL,
            &[1, 2, 3],
            BudgetMode::Evaluations,
            &params,
            dir.path(),
        )
        .unwrap();
        assert_eq!(out.report.runs.len(), 12);
        assert_eq!(out.report.aggregates.len(), 4);
        for agg in &out.report.aggregates {
            assert!(agg.min_total <= agg.median_total);
            assert!(agg.median_total <= agg.max_total);
        }
        // Budget parity: every non-FTLBO run reaches the FTLBO budget, and
        // FTLBO consumes it exactly.
        let budget = out.report.budget_evaluations.unwrap();
        for run in &out.report.runs {
            if run.algorithm == "ftlbo" {
                assert_eq!(run.evaluations, budget);
            } else {
                assert!(run.evaluations >= budget);
            }
        }
        assert!(dir.path().join("report.toml").exists());
        assert!(dir.path().join("summary.txt").exists());
        assert!(dir
            .path()
            .join("convergence")
            .join("ftlbo_seed2.csv")
            .exists());
        // The report parses back as TOML.
        let text = fs::read_to_string(dir.path().join("report.toml")).unwrap();
        let parsed: toml::Value = toml::from_str(&text).unwrap();
        assert_eq!(
            parsed["schema"].as_str().unwrap(),
            "swarmplan-compare-v1"
        );
    }

    #[test]
    fn compare_single_run_matches_plan_metrics() {
        let file = load_scenario_file(SCENARIO).unwrap();
        let params = HarnessParams::from_defaults(&file.optimizer);
        let dir = tempfile::tempdir().unwrap();
        let out = compare(
            &file,
            &[Algorithm::Ftlbo],
            &[9],
            BudgetMode::Iterations,
            &params,
            dir.path(),
        )
        .unwrap();
        let dir2 = tempfile::tempdir().unwrap();
        let planned = plan(&file, &params, 9, dir2.path()).unwrap();
        assert_eq!(out.report.runs[0].cost, planned.cost);
        assert_eq!(out.report.runs[0].evaluations, planned.evaluations);
    }

    #[test]
    fn infeasible_goal_fails_compare() {
        let text = SCENARIO.replace("goal = [85.0, 50.0, 4.0]", "goal = [45.0, 28.0, 4.0]");
        let file = load_scenario_file(&text).unwrap();
        let params = HarnessParams::from_defaults(&file.optimizer);
        let dir = tempfile::tempdir().unwrap();
        let err = compare(
            &file,
            &[Algorithm::Tlbo],
            &[1],
            BudgetMode::Iterations,
            &params,
            dir.path(),
        );
        assert!(matches!(err, Err(Error::EndpointInsideObstacle { .. })));
    }
}
