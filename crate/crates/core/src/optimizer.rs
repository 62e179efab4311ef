//! Population optimizers over the path fitness: plain teaching-learning-based
//! optimization (TLBO) and its formation-planning variant (FTLBO) that adds
//! chaotic mutation with decaying probability, elite worst-replacement, and
//! per-waypoint ("multi-subject") learning.
//!
//! Every candidate acceptance is strictly accept-if-better under the total
//! cost order, so the best cost is non-increasing by construction. All
//! randomness flows from one seeded generator consumed in a fixed order,
//! making runs bit-reproducible. Every algorithm in this crate initializes
//! its population with the same draws, so equal seeds mean equal iteration-0
//! populations across algorithms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fitness::{CostBreakdown, EvaluationContext};
use crate::scenario::Scenario;

/// One candidate solution: a flattened waypoint vector with its cached cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Student {
    pub vector: Vec<f64>,
    pub cost: CostBreakdown,
}

impl Student {
    /// Evaluate a vector and cache its cost. The cache is never mutated
    /// separately from the vector.
    pub fn from_vector(vector: Vec<f64>, ctx: &EvaluationContext) -> Self {
        let cost = ctx.evaluate_vector(&vector);
        Self { vector, cost }
    }
}

/// Per-iteration progress of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceSample {
    pub iteration: usize,
    pub best_total: f64,
    pub mean_total: f64,
    /// Cumulative candidate evaluations consumed so far.
    pub evaluations: u64,
}

/// The best/mean cost trajectory of one run; the data behind a convergence
/// plot. Indexed by iteration, entry 0 being the freshly initialized
/// population.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConvergenceRecord {
    samples: Vec<ConvergenceSample>,
}

impl ConvergenceRecord {
    pub(crate) fn push_sample(
        &mut self,
        iteration: usize,
        best_total: f64,
        mean_total: f64,
        evaluations: u64,
    ) {
        self.samples.push(ConvergenceSample {
            iteration,
            best_total,
            mean_total,
            evaluations,
        });
    }

    pub(crate) fn push_state(&mut self, iteration: usize, students: &[Student], evaluations: u64) {
        let best = students
            .iter()
            .min_by(|a, b| a.cost.compare(&b.cost))
            .expect("population is never empty");
        let mean = students.iter().map(|s| s.cost.total).sum::<f64>() / students.len() as f64;
        self.push_sample(iteration, best.cost.total, mean, evaluations);
    }

    pub fn samples(&self) -> &[ConvergenceSample] {
        &self.samples
    }

    pub fn final_sample(&self) -> &ConvergenceSample {
        self.samples.last().expect("record has at least the initial sample")
    }

    /// First iteration whose best cost is within `fraction` of the final
    /// best, or `None` when the run never reached a finite cost. With
    /// `fraction = 0.01` this is "iterations to converge within 1%".
    pub fn iterations_to_within(&self, fraction: f64) -> Option<usize> {
        let target = self.final_sample().best_total;
        if !target.is_finite() {
            return None;
        }
        let threshold = target * (1.0 + fraction);
        self.samples
            .iter()
            .find(|s| s.best_total <= threshold)
            .map(|s| s.iteration)
    }
}

/// Step size of the chaotic mutation, either relative to the working volume
/// or absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationScale {
    /// Fraction of each axis range; the default is 5%.
    FractionOfRange(f64),
    /// Fixed step in meters, identical on every axis.
    Meters(f64),
}

impl Default for MutationScale {
    fn default() -> Self {
        MutationScale::FractionOfRange(0.05)
    }
}

impl MutationScale {
    fn per_axis(&self, scenario: &Scenario) -> Result<[f64; 3]> {
        let value = match self {
            MutationScale::FractionOfRange(f) | MutationScale::Meters(f) => *f,
        };
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::invalid("mutation_scale", "must be finite and > 0"));
        }
        Ok(match self {
            MutationScale::FractionOfRange(f) => [
                f * (scenario.upper_bound.x - scenario.lower_bound.x),
                f * (scenario.upper_bound.y - scenario.lower_bound.y),
                f * (scenario.upper_bound.z - scenario.lower_bound.z),
            ],
            MutationScale::Meters(m) => [*m, *m, *m],
        })
    }
}

/// When a run stops: after a fixed number of iterations, or once a cumulative
/// evaluation budget is spent (checked at iteration boundaries).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCondition {
    Iterations(usize),
    Evaluations(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TlboParams {
    pub population: usize,
    pub stop: StopCondition,
    pub seed: u64,
    /// Replace one random member with the straight start-goal line. Off by
    /// default: the initial population is purely uniform.
    pub straight_line_seed: bool,
}

impl TlboParams {
    pub fn new(population: usize, iterations: usize, seed: u64) -> Self {
        Self {
            population,
            stop: StopCondition::Iterations(iterations),
            seed,
            straight_line_seed: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FtlboParams {
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    /// Number of learning subjects; defaults to one per waypoint.
    pub subjects: Option<usize>,
    pub mutation_scale: MutationScale,
    pub straight_line_seed: bool,
}

impl FtlboParams {
    pub fn new(population: usize, iterations: usize, seed: u64) -> Self {
        Self {
            population,
            iterations,
            seed,
            subjects: None,
            mutation_scale: MutationScale::default(),
            straight_line_seed: false,
        }
    }
}

/// Result of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub best: Student,
    pub record: ConvergenceRecord,
}

// ---------------------------------------------------------------------------
// Chaotic mutation primitives
// ---------------------------------------------------------------------------

/// One step of the logistic map at full chaos: `x -> 4x(1-x)`, closed on
/// [0, 1]. Note the degenerate orbits: 0 and 0.75 are fixed points and 0.5
/// maps to 1 and then sticks at 0; seeding avoids their neighborhoods.
pub fn chaos_step(x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x));
    (4.0 * x * (1.0 - x)).clamp(0.0, 1.0)
}

/// Map a chaotic value in [0, 1] onto a mutation step in [-1, 1].
pub fn mutation_variable(x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x));
    2.0 * x - 1.0
}

/// Linearly decaying mutation probability: 1 at the first iteration, 0 at the
/// last.
pub fn mutation_probability(iteration: usize, max_iteration: usize) -> f64 {
    debug_assert!(max_iteration > 0 && iteration <= max_iteration);
    1.0 - iteration as f64 / max_iteration as f64
}

/// Draw a chaos seed away from the logistic map's degenerate orbits
/// (0, 1, and the short cycles through 0.25, 0.5, 0.75).
fn draw_chaos_seed(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x = 0.01 + 0.98 * rng.random::<f64>();
        if [0.25, 0.5, 0.75].iter().all(|c| (x - c).abs() > 1e-6) {
            return x;
        }
    }
}

// ---------------------------------------------------------------------------
// Update formulas (shared by the phases; unit-tested directly)
// ---------------------------------------------------------------------------

/// Teacher-phase update on one coordinate: move from `s` toward the teacher
/// `t` relative to `lambda` times the class mean `a`.
pub(crate) fn teaching_step(s: f64, t: f64, a: f64, w0: f64, lambda: f64) -> f64 {
    s + w0 * (t - lambda * a)
}

/// Learner-phase update on one coordinate: step by the absolute difference
/// between two classmates, scaled by `w`.
pub(crate) fn learning_step(s: f64, m: f64, n: f64, w: f64) -> f64 {
    s + w * (m - n).abs()
}

// ---------------------------------------------------------------------------
// Classroom
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ClassroomConfig {
    pub population: usize,
    pub subjects: usize,
    pub seed: u64,
    pub max_iteration: usize,
    pub mutation_scale: MutationScale,
    pub straight_line_seed: bool,
}

/// The whole population plus the run state that evolves with it: the seeded
/// generator, the chaotic sequence, and the iteration counter.
#[derive(Debug, Clone)]
pub struct Classroom {
    students: Vec<Student>,
    subjects: usize,
    rng: ChaCha8Rng,
    chaos: f64,
    iteration: usize,
    max_iteration: usize,
    mutation_scale: [f64; 3],
}

/// Uniform random vectors within the per-axis bounds. Every algorithm in the
/// crate calls this first with a fresh generator, which is what makes equal
/// seeds produce equal initial populations across algorithms.
pub(crate) fn init_vectors(
    rng: &mut ChaCha8Rng,
    population: usize,
    ctx: &EvaluationContext,
) -> Vec<Vec<f64>> {
    let dim = ctx.dimension();
    (0..population)
        .map(|_| {
            (0..dim)
                .map(|k| {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    lo + rng.random::<f64>() * (hi - lo)
                })
                .collect()
        })
        .collect()
}

/// Waypoints evenly spaced on the start-goal line, flattened.
pub(crate) fn straight_line_vector(ctx: &EvaluationContext) -> Vec<f64> {
    let s = ctx.scenario.start;
    let g = ctx.scenario.goal;
    let m = ctx.scenario.waypoint_count;
    let mut v = Vec::with_capacity(3 * m);
    for j in 1..=m {
        let t = j as f64 / (m + 1) as f64;
        v.push(s.x + t * (g.x - s.x));
        v.push(s.y + t * (g.y - s.y));
        v.push(s.z + t * (g.z - s.z));
    }
    v
}

/// Fail fast when an endpoint sits inside an obstacle disk: every path from
/// such an endpoint is infeasible, so the search cannot start.
pub(crate) fn check_endpoints_clear(ctx: &EvaluationContext) -> Result<()> {
    for (endpoint, p) in [("start", ctx.scenario.start), ("goal", ctx.scenario.goal)] {
        for (i, obs) in ctx.scenario.obstacles.iter().enumerate() {
            let d = p.horizontal_distance(&obs.center);
            if d <= obs.radius {
                return Err(Error::EndpointInsideObstacle {
                    endpoint,
                    obstacle_index: i,
                    distance_m: d,
                    radius_m: obs.radius,
                });
            }
        }
    }
    Ok(())
}

fn draw_index_excluding(rng: &mut ChaCha8Rng, population: usize, exclude: &[usize]) -> usize {
    loop {
        let j = rng.random_range(0..population);
        if !exclude.contains(&j) {
            return j;
        }
    }
}

/// Subject blocks: contiguous whole-waypoint coordinate ranges, sizes as
/// equal as possible. With `subjects == waypoint count` each block is exactly
/// one waypoint's three coordinates.
fn subject_blocks(dim: usize, subjects: usize) -> Vec<std::ops::Range<usize>> {
    let waypoints = dim / 3;
    let base = waypoints / subjects;
    let extra = waypoints % subjects;
    let mut blocks = Vec::with_capacity(subjects);
    let mut w = 0;
    for b in 0..subjects {
        let len = base + usize::from(b < extra);
        blocks.push(3 * w..3 * (w + len));
        w += len;
    }
    blocks
}

impl Classroom {
    pub fn new(ctx: &EvaluationContext, cfg: &ClassroomConfig) -> Result<Self> {
        if cfg.population < 4 {
            return Err(Error::invalid(
                "population",
                "needs at least 4 students (the learner phase draws three distinct indices)",
            ));
        }
        let waypoints = ctx.scenario.waypoint_count;
        if cfg.subjects == 0 || cfg.subjects > waypoints {
            return Err(Error::invalid(
                "subjects",
                format!("must be in 1..={waypoints} (one per waypoint at most)"),
            ));
        }
        let mutation_scale = cfg.mutation_scale.per_axis(&ctx.scenario)?;

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut vectors = init_vectors(&mut rng, cfg.population, ctx);
        if cfg.straight_line_seed {
            vectors[0] = straight_line_vector(ctx);
        }
        let students = vectors
            .into_iter()
            .map(|v| Student::from_vector(v, ctx))
            .collect();
        let chaos = draw_chaos_seed(&mut rng);

        Ok(Self {
            students,
            subjects: cfg.subjects,
            rng,
            chaos,
            iteration: 0,
            max_iteration: cfg.max_iteration,
            mutation_scale,
        })
    }

    pub fn students(&self) -> &[Student] {
        &self.students
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn chaos_state(&self) -> f64 {
        self.chaos
    }

    #[cfg(test)]
    pub(crate) fn set_chaos(&mut self, x: f64) {
        self.chaos = x;
    }

    /// Index of the best student; ties keep the earliest index.
    pub fn best_index(&self) -> usize {
        let mut best = 0;
        for i in 1..self.students.len() {
            if self.students[i].cost.is_better_than(&self.students[best].cost) {
                best = i;
            }
        }
        best
    }

    /// Index of the worst student; ties keep the earliest index.
    pub fn worst_index(&self) -> usize {
        let mut worst = 0;
        for i in 1..self.students.len() {
            if self.students[worst].cost.is_better_than(&self.students[i].cost) {
                worst = i;
            }
        }
        worst
    }

    pub fn best(&self) -> &Student {
        &self.students[self.best_index()]
    }

    /// Advance the chaotic sequence by one step.
    fn advance_chaos(&mut self) {
        self.chaos = chaos_step(self.chaos);
    }

    /// Consume the current chaos value as a mutation step and advance.
    fn next_mutation_variable(&mut self) -> f64 {
        let z = mutation_variable(self.chaos);
        self.advance_chaos();
        z
    }

    /// Teaching phase: every student steps toward the class best relative to
    /// the class mean, keeping the step only when strictly better. The
    /// teacher and mean are fixed at phase entry. Returns evaluations used.
    pub fn teacher_phase(&mut self, ctx: &EvaluationContext) -> u64 {
        let pop = self.students.len();
        let dim = self.students[0].vector.len();
        let teacher = self.students[self.best_index()].vector.clone();
        let mut mean = vec![0.0; dim];
        for s in &self.students {
            for (m, v) in mean.iter_mut().zip(&s.vector) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= pop as f64;
        }

        for i in 0..pop {
            let lambda = if self.rng.random::<f64>() < 0.5 { 1.0 } else { 2.0 };
            let w0 = self.rng.random::<f64>();
            let candidate: Vec<f64> = (0..dim)
                .map(|k| {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    teaching_step(self.students[i].vector[k], teacher[k], mean[k], w0, lambda)
                        .clamp(lo, hi)
                })
                .collect();
            let cost = ctx.evaluate_vector(&candidate);
            if cost.is_better_than(&self.students[i].cost) {
                self.students[i] = Student {
                    vector: candidate,
                    cost,
                };
            }
        }
        pop as u64
    }

    /// Learning phase: every student steps by the absolute difference of two
    /// distinct classmates, accept-if-better. Returns evaluations used.
    pub fn learner_phase(&mut self, ctx: &EvaluationContext) -> u64 {
        let pop = self.students.len();
        let dim = self.students[0].vector.len();
        for i in 0..pop {
            let m = draw_index_excluding(&mut self.rng, pop, &[i]);
            let n = draw_index_excluding(&mut self.rng, pop, &[i, m]);
            let w = self.rng.random::<f64>();
            let candidate: Vec<f64> = (0..dim)
                .map(|k| {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    learning_step(
                        self.students[i].vector[k],
                        self.students[m].vector[k],
                        self.students[n].vector[k],
                        w,
                    )
                    .clamp(lo, hi)
                })
                .collect();
            let cost = ctx.evaluate_vector(&candidate);
            if cost.is_better_than(&self.students[i].cost) {
                self.students[i] = Student {
                    vector: candidate,
                    cost,
                };
            }
        }
        pop as u64
    }

    /// Multi-subject learning: for each student and each subject block, step
    /// that block by the absolute difference from a random partner's block,
    /// accepting the whole-vector candidate only when strictly better.
    /// Accepted blocks feed the candidates of this student's later subjects.
    /// Returns evaluations used.
    pub fn multi_subject_learner_phase(&mut self, ctx: &EvaluationContext) -> u64 {
        let pop = self.students.len();
        let dim = self.students[0].vector.len();
        let blocks = subject_blocks(dim, self.subjects);
        let mut evaluations = 0u64;
        for i in 0..pop {
            for block in &blocks {
                let partner = draw_index_excluding(&mut self.rng, pop, &[i]);
                let w = self.rng.random::<f64>();
                let mut candidate = self.students[i].vector.clone();
                for k in block.clone() {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    candidate[k] = learning_step(
                        candidate[k],
                        candidate[k],
                        self.students[partner].vector[k],
                        w,
                    )
                    .clamp(lo, hi);
                }
                let cost = ctx.evaluate_vector(&candidate);
                evaluations += 1;
                if cost.is_better_than(&self.students[i].cost) {
                    self.students[i] = Student {
                        vector: candidate,
                        cost,
                    };
                }
            }
        }
        evaluations
    }

    /// Chaotic mutation of one student: each dimension mutates with the
    /// decaying probability, stepping by the next chaotic variable times the
    /// per-axis scale. The caller passes the result through
    /// [`Classroom::elite_replace`]. Uses exactly one evaluation.
    pub fn mutate_student(&mut self, s: &Student, ctx: &EvaluationContext) -> Student {
        let mu = mutation_probability(self.iteration, self.max_iteration);
        let mut vector = s.vector.clone();
        for (k, v) in vector.iter_mut().enumerate() {
            let w0 = self.rng.random::<f64>();
            if w0 < mu {
                let z = self.next_mutation_variable();
                let (lo, hi) = ctx.scenario.axis_bounds(k);
                *v = (*v + z * self.mutation_scale[k % 3]).clamp(lo, hi);
            }
        }
        Student::from_vector(vector, ctx)
    }

    /// Replace the worst student (ties broken by index) iff the candidate is
    /// strictly better. Population size never changes.
    pub fn elite_replace(&mut self, candidate: Student) -> bool {
        let worst = self.worst_index();
        if candidate.cost.is_better_than(&self.students[worst].cost) {
            self.students[worst] = candidate;
            true
        } else {
            false
        }
    }
}

// ---------------------------------------------------------------------------
// Run loops
// ---------------------------------------------------------------------------

/// Evaluations one TLBO iteration consumes.
pub fn tlbo_evaluations_per_iteration(population: usize) -> u64 {
    2 * population as u64
}

/// Total evaluations an FTLBO run consumes: the initial population plus, per
/// iteration, one teaching candidate per student, one mutation candidate, and
/// one multi-subject candidate per student per subject.
pub fn ftlbo_evaluation_budget(population: usize, iterations: usize, subjects: usize) -> u64 {
    population as u64
        + iterations as u64 * (population as u64 + 1 + (population * subjects) as u64)
}

fn planned_iterations(stop: StopCondition, population: usize, per_iteration: u64) -> usize {
    match stop {
        StopCondition::Iterations(n) => n,
        StopCondition::Evaluations(budget) => {
            let after_init = budget.saturating_sub(population as u64);
            (after_init.div_ceil(per_iteration)) as usize
        }
    }
}

/// Plain TLBO: alternate teaching and learning phases.
pub fn run_tlbo(ctx: &EvaluationContext, params: &TlboParams) -> Result<RunOutcome> {
    check_endpoints_clear(ctx)?;
    let iterations = planned_iterations(
        params.stop,
        params.population,
        tlbo_evaluations_per_iteration(params.population),
    );
    let mut class = Classroom::new(
        ctx,
        &ClassroomConfig {
            population: params.population,
            subjects: 1,
            seed: params.seed,
            max_iteration: iterations.max(1),
            mutation_scale: MutationScale::default(),
            straight_line_seed: params.straight_line_seed,
        },
    )?;

    let mut evaluations = params.population as u64;
    let mut record = ConvergenceRecord::default();
    record.push_state(0, &class.students, evaluations);

    for _ in 0..iterations {
        evaluations += class.teacher_phase(ctx);
        evaluations += class.learner_phase(ctx);
        class.iteration += 1;
        record.push_state(class.iteration, &class.students, evaluations);
    }

    Ok(RunOutcome {
        best: class.best().clone(),
        record,
    })
}

/// FTLBO: per iteration, advance the chaos sequence, run the teaching phase,
/// mutate a copy of the current best and offer it via elite replacement, run
/// multi-subject learning, then re-verify the incumbent's violation cost.
pub fn run_ftlbo(ctx: &EvaluationContext, params: &FtlboParams) -> Result<RunOutcome> {
    check_endpoints_clear(ctx)?;
    let subjects = params.subjects.unwrap_or(ctx.scenario.waypoint_count);
    let mut class = Classroom::new(
        ctx,
        &ClassroomConfig {
            population: params.population,
            subjects,
            seed: params.seed,
            max_iteration: params.iterations.max(1),
            mutation_scale: params.mutation_scale,
            straight_line_seed: params.straight_line_seed,
        },
    )?;

    let mut evaluations = params.population as u64;
    let mut record = ConvergenceRecord::default();
    record.push_state(0, &class.students, evaluations);

    for _ in 0..params.iterations {
        class.advance_chaos();
        evaluations += class.teacher_phase(ctx);

        let incumbent = class.best().clone();
        let mutated = class.mutate_student(&incumbent, ctx);
        evaluations += 1;
        class.elite_replace(mutated);

        evaluations += class.multi_subject_learner_phase(ctx);

        // Violation check: re-derive the incumbent's violation cost from its
        // vector and confirm the cache. Not a candidate, so not counted
        // toward the evaluation budget.
        let best = class.best();
        let fresh = ctx.evaluate_vector(&best.vector);
        assert_eq!(
            fresh.safety.to_bits(),
            best.cost.safety.to_bits(),
            "cached violation cost diverged from its vector"
        );

        class.iteration += 1;
        record.push_state(class.iteration, &class.students, evaluations);
    }

    Ok(RunOutcome {
        best: class.best().clone(),
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formation::FormationSpec;
    use crate::scenario::load_scenario;

    fn empty_scenario(waypoints: usize) -> EvaluationContext {
        let text = format!(
            r#"
            [area]
            lower = [0.0, 0.0, 0.0]
            upper = [100.0, 60.0, 12.0]
            [altitude]
            min_m = 2.0
            max_m = 7.0
            [route]
            start = [5.0, 5.0, 4.0]
            goal = [85.0, 50.0, 4.0]
            waypoints = {waypoints}
        "#
        );
        EvaluationContext::new(load_scenario(&text).unwrap(), FormationSpec::single()).unwrap()
    }

    fn blocked_scenario() -> EvaluationContext {
        let text = r#"
            [area]
            lower = [0.0, 0.0, 0.0]
            upper = [100.0, 60.0, 12.0]
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
        "#;
        EvaluationContext::new(load_scenario(text).unwrap(), FormationSpec::single()).unwrap()
    }

    #[test]
    fn chaos_step_examples() {
        assert!((chaos_step(0.3) - 0.84).abs() < 1e-15);
        assert_eq!(chaos_step(0.5), 1.0);
        assert_eq!(chaos_step(1.0), 0.0);
        assert_eq!(chaos_step(0.0), 0.0);
    }

    #[test]
    fn mutation_variable_examples() {
        assert!((mutation_variable(0.3) + 0.4).abs() < 1e-15);
        assert_eq!(mutation_variable(0.5), 0.0);
        assert_eq!(mutation_variable(1.0), 1.0);
    }

    #[test]
    fn mutation_probability_examples() {
        assert!((mutation_probability(30, 150) - 0.8).abs() < 1e-15);
        assert_eq!(mutation_probability(0, 150), 1.0);
        assert_eq!(mutation_probability(150, 150), 0.0);
    }

    #[test]
    fn teaching_step_one_dimensional_example() {
        assert_eq!(teaching_step(1.0, 4.0, 2.0, 0.5, 1.0), 2.0);
        // Zero step when the teacher equals lambda times the mean.
        assert_eq!(teaching_step(1.0, 4.0, 2.0, 0.7, 2.0), 1.0);
    }

    #[test]
    fn learning_step_one_dimensional_example() {
        assert_eq!(learning_step(1.0, 5.0, 2.0, 0.5), 2.5);
        // Equal classmates: no movement.
        assert_eq!(learning_step(1.0, 3.0, 3.0, 0.9), 1.0);
    }

    #[test]
    fn subject_blocks_partition_waypoints() {
        assert_eq!(subject_blocks(30, 10), (0..10).map(|w| 3 * w..3 * w + 3).collect::<Vec<_>>());
        let blocks = subject_blocks(30, 3);
        assert_eq!(blocks, vec![0..12, 12..21, 21..30]);
        assert_eq!(subject_blocks(3, 1), vec![0..3]);
    }

    #[test]
    fn chaos_seed_avoids_degenerate_orbits() {
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = draw_chaos_seed(&mut rng);
            assert!((0.01..=0.99).contains(&x));
            for c in [0.25, 0.5, 0.75] {
                assert!((x - c).abs() > 1e-6);
            }
        }
    }

    #[test]
    fn classroom_rejects_tiny_population() {
        let ctx = empty_scenario(2);
        let err = Classroom::new(
            &ctx,
            &ClassroomConfig {
                population: 3,
                subjects: 1,
                seed: 0,
                max_iteration: 10,
                mutation_scale: MutationScale::default(),
                straight_line_seed: false,
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn elite_replace_semantics() {
        let ctx = empty_scenario(1);
        let mut class = Classroom::new(
            &ctx,
            &ClassroomConfig {
                population: 5,
                subjects: 1,
                seed: 7,
                max_iteration: 10,
                mutation_scale: MutationScale::default(),
                straight_line_seed: false,
            },
        )
        .unwrap();

        let worst = class.worst_index();
        let worst_student = class.students[worst].clone();

        // A candidate equal in cost to the worst student must not replace it.
        assert!(!class.elite_replace(worst_student.clone()));
        assert_eq!(class.students[worst], worst_student);

        // The straight line beats every random candidate here; it must land
        // exactly where the worst student was, with the size unchanged.
        let line = Student::from_vector(straight_line_vector(&ctx), &ctx);
        assert!(class.elite_replace(line.clone()));
        assert_eq!(class.students.len(), 5);
        assert_eq!(class.students[worst], line);

        // A candidate worse than everyone (infinite task cost: a waypoint on
        // the ground) leaves the class unchanged.
        let before = class.students.clone();
        let bad = Student::from_vector(vec![0.0, 0.0, 0.0], &ctx);
        assert!(bad.cost.total.is_infinite());
        assert!(!class.elite_replace(bad));
        assert_eq!(class.students, before);
    }

    #[test]
    fn mutation_limits() {
        let ctx = empty_scenario(2);
        let mut class = Classroom::new(
            &ctx,
            &ClassroomConfig {
                population: 4,
                subjects: 1,
                seed: 3,
                max_iteration: 10,
                mutation_scale: MutationScale::Meters(1.0),
                straight_line_seed: false,
            },
        )
        .unwrap();

        // mu = 0 at the final iteration: nothing mutates.
        class.iteration = 10;
        let s = Student::from_vector(vec![50.0, 30.0, 5.0, 60.0, 20.0, 6.0], &ctx);
        let out = class.mutate_student(&s, &ctx);
        assert_eq!(out.vector, s.vector);

        // mu = 1 at iteration 0: every dimension moves (scale 1 m, interior
        // point, so no clamping hides the step), and the first dimension
        // moves by exactly 2 * 0.3 - 1 = -0.4 when the chaos state is 0.3.
        class.iteration = 0;
        class.set_chaos(0.3);
        let out = class.mutate_student(&s, &ctx);
        assert!((out.vector[0] - (s.vector[0] - 0.4)).abs() < 1e-12);
        for (a, b) in out.vector.iter().zip(&s.vector) {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn zero_iterations_returns_initial_best() {
        let ctx = empty_scenario(3);
        let out = run_tlbo(&ctx, &TlboParams::new(10, 0, 5)).unwrap();
        assert_eq!(out.record.samples().len(), 1);
        assert_eq!(out.record.final_sample().evaluations, 10);
    }

    #[test]
    fn fixed_seed_is_bit_reproducible() {
        let ctx = blocked_scenario();
        let a = run_tlbo(&ctx, &TlboParams::new(12, 20, 99)).unwrap();
        let b = run_tlbo(&ctx, &TlboParams::new(12, 20, 99)).unwrap();
        assert_eq!(a.best.vector, b.best.vector);
        assert_eq!(a.record, b.record);

        let fa = run_ftlbo(&ctx, &FtlboParams::new(12, 20, 99)).unwrap();
        let fb = run_ftlbo(&ctx, &FtlboParams::new(12, 20, 99)).unwrap();
        assert_eq!(fa.best.vector, fb.best.vector);
        assert_eq!(fa.record, fb.record);
    }

    #[test]
    fn best_cost_never_increases() {
        let ctx = blocked_scenario();
        for (name, outcome) in [
            ("tlbo", run_tlbo(&ctx, &TlboParams::new(10, 30, 2)).unwrap()),
            ("ftlbo", run_ftlbo(&ctx, &FtlboParams::new(10, 30, 2)).unwrap()),
        ] {
            let samples = outcome.record.samples();
            for w in samples.windows(2) {
                assert!(
                    w[1].best_total <= w[0].best_total,
                    "{name}: best rose from {} to {}",
                    w[0].best_total,
                    w[1].best_total
                );
            }
        }
    }

    #[test]
    fn students_stay_in_bounds_through_all_phases() {
        let ctx = blocked_scenario();
        let mut class = Classroom::new(
            &ctx,
            &ClassroomConfig {
                population: 8,
                subjects: 4,
                seed: 11,
                max_iteration: 6,
                mutation_scale: MutationScale::default(),
                straight_line_seed: false,
            },
        )
        .unwrap();
        for _ in 0..6 {
            class.advance_chaos();
            class.teacher_phase(&ctx);
            let incumbent = class.best().clone();
            let mutated = class.mutate_student(&incumbent, &ctx);
            class.elite_replace(mutated);
            class.learner_phase(&ctx);
            class.multi_subject_learner_phase(&ctx);
            class.iteration += 1;

            assert_eq!(class.students.len(), 8);
            assert!((0.0..=1.0).contains(&class.chaos_state()));
            for s in class.students() {
                for (k, &v) in s.vector.iter().enumerate() {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    assert!(v >= lo && v <= hi, "dim {k} = {v} outside [{lo}, {hi}]");
                }
            }
        }
    }

    #[test]
    fn identical_students_survive_teacher_phase_unchanged() {
        // Identical population sitting at the unconstrained optimum (the
        // straight line): lambda = 1 candidates equal the incumbent and are
        // rejected by strictness; lambda = 2 candidates move off the optimum
        // and lose. Either way every vector must survive unchanged.
        let ctx = empty_scenario(2);
        let mut class = Classroom::new(
            &ctx,
            &ClassroomConfig {
                population: 6,
                subjects: 1,
                seed: 21,
                max_iteration: 5,
                mutation_scale: MutationScale::default(),
                straight_line_seed: false,
            },
        )
        .unwrap();
        let line = Student::from_vector(straight_line_vector(&ctx), &ctx);
        for s in &mut class.students {
            *s = line.clone();
        }
        class.teacher_phase(&ctx);
        for s in class.students() {
            assert_eq!(s.vector, line.vector);
        }
    }

    #[test]
    fn infeasible_endpoint_rejected_before_search() {
        let text = r#"
            [area]
            lower = [0.0, 0.0, 0.0]
            upper = [100.0, 60.0, 12.0]
            [altitude]
            min_m = 2.0
            max_m = 7.0
            [route]
            start = [5.0, 5.0, 4.0]
            goal = [85.0, 50.0, 4.0]
            waypoints = 2
            [[obstacle]]
            center = [84.0, 50.0]
            radius = 3.0
        "#;
        let ctx =
            EvaluationContext::new(load_scenario(text).unwrap(), FormationSpec::single()).unwrap();
        let err = run_ftlbo(&ctx, &FtlboParams::new(10, 5, 1)).unwrap_err();
        assert!(matches!(err, Error::EndpointInsideObstacle { endpoint: "goal", .. }));
    }

    #[test]
    fn tlbo_approaches_straight_line_on_empty_scenario() {
        let ctx = empty_scenario(3);
        let straight = ctx.scenario.start.distance(&ctx.scenario.goal);
        let out = run_tlbo(&ctx, &TlboParams::new(30, 80, 1)).unwrap();
        assert!(out.best.cost.total < straight * 1.05, "total = {}", out.best.cost.total);
    }

    #[test]
    fn ftlbo_approaches_straight_line_on_empty_scenario() {
        let ctx = empty_scenario(3);
        let straight = ctx.scenario.start.distance(&ctx.scenario.goal);
        let out = run_ftlbo(&ctx, &FtlboParams::new(30, 60, 1)).unwrap();
        assert!(out.best.cost.total < straight * 1.02, "total = {}", out.best.cost.total);
    }

    #[test]
    fn evaluation_budget_formula_matches_run() {
        let ctx = empty_scenario(4);
        let params = FtlboParams {
            subjects: Some(2),
            ..FtlboParams::new(6, 9, 13)
        };
        let out = run_ftlbo(&ctx, &params).unwrap();
        assert_eq!(
            out.record.final_sample().evaluations,
            ftlbo_evaluation_budget(6, 9, 2)
        );
    }

    #[test]
    fn evaluation_budget_stop_condition() {
        let ctx = empty_scenario(2);
        let budget = 10 + 2 * 10 * 7; // exactly 7 iterations
        let params = TlboParams {
            stop: StopCondition::Evaluations(budget as u64),
            ..TlboParams::new(10, 0, 4)
        };
        let out = run_tlbo(&ctx, &params).unwrap();
        assert_eq!(out.record.final_sample().iteration, 7);
        assert_eq!(out.record.final_sample().evaluations, budget as u64);
    }

    #[test]
    fn iterations_to_within_fraction() {
        let ctx = blocked_scenario();
        let out = run_ftlbo(&ctx, &FtlboParams::new(10, 25, 8)).unwrap();
        let it = out.record.iterations_to_within(0.01).unwrap();
        assert!(it <= 25);
        let sample = &out.record.samples()[it];
        assert!(sample.best_total <= out.best.cost.total * 1.01);
    }
}
