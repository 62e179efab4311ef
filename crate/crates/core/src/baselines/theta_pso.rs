//! Phase-angle particle swarm optimization.
//!
//! Particles evolve a phase angle per dimension instead of a raw coordinate;
//! positions decode as `x = mid + half_range * sin(theta)`. Since the sine is
//! bounded, decoded positions can never leave the working volume, so
//! positions need no clamping anywhere.

use super::*;

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPsoParams {
    pub population: usize,
    pub stop: StopCondition,
    pub seed: u64,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl ThetaPsoParams {
    /// Constriction-style defaults: inertia 0.729, both attraction
    /// coefficients 1.494.
    pub fn new(population: usize, iterations: usize, seed: u64) -> Self {
        Self {
            population,
            stop: StopCondition::Iterations(iterations),
            seed,
            inertia: 0.729,
            cognitive: 1.494,
            social: 1.494,
        }
    }
}

const THETA_LIMIT: f64 = std::f64::consts::FRAC_PI_2;

struct AngleSpace {
    mid: Vec<f64>,
    half: Vec<f64>,
}

impl AngleSpace {
    fn new(ctx: &EvaluationContext) -> Self {
        let dim = ctx.dimension();
        let mut mid = Vec::with_capacity(dim);
        let mut half = Vec::with_capacity(dim);
        for k in 0..dim {
            let (lo, hi) = ctx.scenario.axis_bounds(k);
            mid.push((lo + hi) / 2.0);
            half.push((hi - lo) / 2.0);
        }
        Self { mid, half }
    }

    fn decode(&self, theta: &[f64]) -> Vec<f64> {
        theta
            .iter()
            .enumerate()
            .map(|(k, t)| self.mid[k] + self.half[k] * t.sin())
            .collect()
    }

    /// Angles whose decode reproduces `x` (up to sine/arcsine rounding).
    fn encode(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(k, v)| (((v - self.mid[k]) / self.half[k]).clamp(-1.0, 1.0)).asin())
            .collect()
    }
}

pub fn run_theta_pso(ctx: &EvaluationContext, params: &ThetaPsoParams) -> Result<RunOutcome> {
    check_endpoints_clear(ctx)?;
    validate_population(params.population)?;
    for (value, field) in [
        (params.inertia, "inertia"),
        (params.cognitive, "cognitive"),
        (params.social, "social"),
    ] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::invalid(field, "must be finite and >= 0"));
        }
    }

    let space = AngleSpace::new(ctx);
    let dim = ctx.dimension();

    // The initial population is drawn in position space from the shared
    // stream and recorded as-is, so iteration-0 statistics are bit-identical
    // across all algorithms given the same seed; the swarm then carries the
    // drawn positions into angle space.
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let particles: Vec<Student> = init_vectors(&mut rng, params.population, ctx)
        .into_iter()
        .map(|v| Student::from_vector(v, ctx))
        .collect();

    let mut evaluations = params.population as u64;
    let mut record = ConvergenceRecord::default();
    record.push_state(0, &particles, evaluations);

    let mut thetas: Vec<Vec<f64>> = particles.iter().map(|p| space.encode(&p.vector)).collect();
    let mut velocities: Vec<Vec<f64>> = vec![vec![0.0; dim]; params.population];
    let mut best_theta: Vec<Vec<f64>> = thetas.clone();
    let mut personal_best: Vec<Student> = particles.clone();
    let mut current: Vec<Student> = particles;

    let mut global_index = 0;
    for i in 1..params.population {
        if personal_best[i].cost.is_better_than(&personal_best[global_index].cost) {
            global_index = i;
        }
    }
    let mut global_best = personal_best[global_index].clone();
    let mut global_theta = best_theta[global_index].clone();

    let mut iteration = 0usize;
    loop {
        match params.stop {
            StopCondition::Iterations(n) => {
                if iteration >= n {
                    break;
                }
            }
            StopCondition::Evaluations(budget) => {
                if evaluations >= budget {
                    break;
                }
            }
        }

        for i in 0..params.population {
            for k in 0..dim {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let v = params.inertia * velocities[i][k]
                    + params.cognitive * r1 * (best_theta[i][k] - thetas[i][k])
                    + params.social * r2 * (global_theta[k] - thetas[i][k]);
                velocities[i][k] = v.clamp(-THETA_LIMIT, THETA_LIMIT);
                thetas[i][k] = (thetas[i][k] + velocities[i][k]).clamp(-THETA_LIMIT, THETA_LIMIT);
            }
            let student = Student::from_vector(space.decode(&thetas[i]), ctx);
            evaluations += 1;
            if student.cost.is_better_than(&personal_best[i].cost) {
                personal_best[i] = student.clone();
                best_theta[i] = thetas[i].clone();
            }
            current[i] = student;
        }

        // Synchronous global-best update after the whole swarm has moved.
        for i in 0..params.population {
            if personal_best[i].cost.is_better_than(&global_best.cost) {
                global_best = personal_best[i].clone();
                global_theta = best_theta[i].clone();
            }
        }

        iteration += 1;
        // The reported best is the incumbent global best (monotone); the mean
        // tracks where the swarm currently flies.
        let mean = current.iter().map(|s| s.cost.total).sum::<f64>() / current.len() as f64;
        record.push_sample(iteration, global_best.cost.total, mean, evaluations);
    }

    Ok(RunOutcome {
        best: global_best,
        record,
    })
}
