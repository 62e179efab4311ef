//! Elitist generational genetic algorithm with tournament selection, uniform
//! arithmetic crossover, and per-gene Gaussian mutation.

use super::*;

#[derive(Debug, Clone, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub stop: StopCondition,
    pub seed: u64,
    /// Probability that a child is a per-gene arithmetic blend of both
    /// parents rather than a copy of the first.
    pub crossover_rate: f64,
    /// Per-gene probability of adding a Gaussian step (sigma = 5% of the
    /// gene's axis range).
    pub mutation_rate: f64,
    pub tournament_size: usize,
}

impl GaParams {
    pub fn new(population: usize, iterations: usize, seed: u64) -> Self {
        Self {
            population,
            stop: StopCondition::Iterations(iterations),
            seed,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            tournament_size: 3,
        }
    }
}

/// Fraction of each axis range used as the mutation standard deviation.
const MUTATION_SIGMA_FRACTION: f64 = 0.05;

fn tournament(rng: &mut ChaCha8Rng, population: &[Student], size: usize) -> usize {
    let mut winner = rng.random_range(0..population.len());
    for _ in 1..size {
        let contender = rng.random_range(0..population.len());
        if population[contender].cost.is_better_than(&population[winner].cost) {
            winner = contender;
        }
    }
    winner
}

pub fn run_ga(ctx: &EvaluationContext, params: &GaParams) -> Result<RunOutcome> {
    check_endpoints_clear(ctx)?;
    validate_population(params.population)?;
    rate_in_unit_interval(params.crossover_rate, "crossover_rate")?;
    rate_in_unit_interval(params.mutation_rate, "mutation_rate")?;
    if params.tournament_size == 0 {
        return Err(Error::invalid("tournament_size", "must be at least 1"));
    }

    let dim = ctx.dimension();
    let sigma: Vec<f64> = (0..dim)
        .map(|k| {
            let (lo, hi) = ctx.scenario.axis_bounds(k);
            MUTATION_SIGMA_FRACTION * (hi - lo)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut population: Vec<Student> = init_vectors(&mut rng, params.population, ctx)
        .into_iter()
        .map(|v| Student::from_vector(v, ctx))
        .collect();

    let mut evaluations = params.population as u64;
    let mut record = ConvergenceRecord::default();
    record.push_state(0, &population, evaluations);

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

        let elite = population
            .iter()
            .min_by(|a, b| a.cost.compare(&b.cost))
            .expect("population is never empty")
            .clone();

        let mut children = Vec::with_capacity(params.population);
        for _ in 0..params.population {
            let p1 = tournament(&mut rng, &population, params.tournament_size);
            let p2 = tournament(&mut rng, &population, params.tournament_size);
            let mut child: Vec<f64> = if rng.random::<f64>() < params.crossover_rate {
                (0..dim)
                    .map(|k| {
                        let u: f64 = rng.random();
                        u * population[p1].vector[k] + (1.0 - u) * population[p2].vector[k]
                    })
                    .collect()
            } else {
                population[p1].vector.clone()
            };
            for (k, gene) in child.iter_mut().enumerate() {
                if rng.random::<f64>() < params.mutation_rate {
                    let (lo, hi) = ctx.scenario.axis_bounds(k);
                    *gene = (*gene + sigma[k] * standard_normal(&mut rng)).clamp(lo, hi);
                }
            }
            children.push(Student::from_vector(child, ctx));
            evaluations += 1;
        }

        // Elitism: the best individual survives unconditionally, displacing
        // the worst child when the generation failed to retain it.
        let best_child = children
            .iter()
            .min_by(|a, b| a.cost.compare(&b.cost))
            .expect("children are never empty");
        if elite.cost.is_better_than(&best_child.cost) {
            let mut worst = 0;
            for i in 1..children.len() {
                if children[worst].cost.is_better_than(&children[i].cost) {
                    worst = i;
                }
            }
            children[worst] = elite;
        }
        population = children;

        iteration += 1;
        record.push_state(iteration, &population, evaluations);
    }

    let best = population
        .iter()
        .min_by(|a, b| a.cost.compare(&b.cost))
        .expect("population is never empty")
        .clone();
    Ok(RunOutcome { best, record })
}
