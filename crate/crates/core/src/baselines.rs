//! Reference algorithms the planner is benchmarked against: a textbook
//! elitist genetic algorithm and a phase-angle particle swarm optimizer.
//!
//! Both consume the same [`EvaluationContext`], draw their initial population
//! from the same generator stream as the TLBO variants (equal seeds mean
//! equal iteration-0 populations), rank candidates under the same cost order,
//! and report the same [`ConvergenceRecord`] schema, so convergence curves
//! are directly comparable per iteration or per evaluation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fitness::EvaluationContext;
use crate::optimizer::{
    check_endpoints_clear, init_vectors, ConvergenceRecord, RunOutcome, StopCondition, Student,
};

mod ga;
mod theta_pso;

pub use ga::{run_ga, GaParams};
pub use theta_pso::{run_theta_pso, ThetaPsoParams};

fn validate_population(population: usize) -> Result<()> {
    if population < 2 {
        return Err(Error::invalid("population", "needs at least 2 members"));
    }
    Ok(())
}

fn rate_in_unit_interval(value: f64, field: &str) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::invalid(field, "must lie in [0, 1]"));
    }
    Ok(())
}

/// Standard normal deviate via Box-Muller, driven by two uniform draws so the
/// stream stays plain uniforms.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]: keeps ln finite
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formation::FormationSpec;
    use crate::optimizer::{run_ftlbo, run_tlbo, FtlboParams, TlboParams};
    use crate::scenario::load_scenario;

    fn context(obstacle: bool) -> EvaluationContext {
        let mut text = String::from(
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
            waypoints = 3
        "#,
        );
        if obstacle {
            text.push_str("[[obstacle]]\ncenter = [45.0, 28.0]\nradius = 8.0\n");
        }
        EvaluationContext::new(load_scenario(&text).unwrap(), FormationSpec::single()).unwrap()
    }

    #[test]
    fn ga_deterministic_and_monotone() {
        let ctx = context(true);
        let p = GaParams::new(12, 25, 3);
        let a = run_ga(&ctx, &p).unwrap();
        let b = run_ga(&ctx, &p).unwrap();
        assert_eq!(a.record, b.record);
        assert_eq!(a.best.vector, b.best.vector);
        for w in a.record.samples().windows(2) {
            assert!(w[1].best_total <= w[0].best_total);
        }
    }

    #[test]
    fn theta_pso_deterministic_and_monotone() {
        let ctx = context(true);
        let p = ThetaPsoParams::new(12, 25, 3);
        let a = run_theta_pso(&ctx, &p).unwrap();
        let b = run_theta_pso(&ctx, &p).unwrap();
        assert_eq!(a.record, b.record);
        assert_eq!(a.best.vector, b.best.vector);
        for w in a.record.samples().windows(2) {
            assert!(w[1].best_total <= w[0].best_total);
        }
    }

    #[test]
    fn ga_near_straight_line_without_obstacles() {
        let ctx = context(false);
        let straight = ctx.scenario.start.distance(&ctx.scenario.goal);
        let out = run_ga(&ctx, &GaParams::new(40, 120, 1)).unwrap();
        assert!(
            out.best.cost.total < straight * 1.05,
            "total = {}",
            out.best.cost.total
        );
    }

    #[test]
    fn theta_pso_near_straight_line_without_obstacles() {
        let ctx = context(false);
        let straight = ctx.scenario.start.distance(&ctx.scenario.goal);
        let out = run_theta_pso(&ctx, &ThetaPsoParams::new(40, 120, 1)).unwrap();
        assert!(
            out.best.cost.total < straight * 1.05,
            "total = {}",
            out.best.cost.total
        );
    }

    #[test]
    fn all_four_algorithms_share_the_seeded_initial_population() {
        let ctx = context(true);
        let seed = 17;
        let ga = run_ga(&ctx, &GaParams::new(10, 1, seed)).unwrap();
        let pso = run_theta_pso(&ctx, &ThetaPsoParams::new(10, 1, seed)).unwrap();
        let tlbo = run_tlbo(&ctx, &TlboParams::new(10, 1, seed)).unwrap();
        let ftlbo = run_ftlbo(&ctx, &FtlboParams::new(10, 1, seed)).unwrap();
        let first = [&ga, &pso, &tlbo, &ftlbo]
            .map(|o| o.record.samples()[0].best_total);
        assert_eq!(first[0].to_bits(), first[1].to_bits());
        assert_eq!(first[0].to_bits(), first[2].to_bits());
        assert_eq!(first[0].to_bits(), first[3].to_bits());
        let means = [&ga, &pso, &tlbo, &ftlbo]
            .map(|o| o.record.samples()[0].mean_total);
        assert_eq!(means[0].to_bits(), means[1].to_bits());
        assert_eq!(means[0].to_bits(), means[2].to_bits());
        assert_eq!(means[0].to_bits(), means[3].to_bits());
    }

    #[test]
    fn evaluation_budget_stop() {
        let ctx = context(false);
        let budget = 10 + 10 * 6;
        let ga = run_ga(
            &ctx,
            &GaParams {
                stop: StopCondition::Evaluations(budget),
                ..GaParams::new(10, 0, 5)
            },
        )
        .unwrap();
        assert_eq!(ga.record.final_sample().evaluations, budget);
        let pso = run_theta_pso(
            &ctx,
            &ThetaPsoParams {
                stop: StopCondition::Evaluations(budget),
                ..ThetaPsoParams::new(10, 0, 5)
            },
        )
        .unwrap();
        assert_eq!(pso.record.final_sample().evaluations, budget);
    }

    #[test]
    fn normal_deviates_have_sane_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 20_000;
        let samples: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.03, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.05, "var = {var}");
    }
}
