//! Shared fixtures for the planner benchmarks.

use swarmplan_core::scenario::load_scenario_file;
use swarmplan_core::{EvaluationContext, ScenarioFile};

/// A mid-size benchmark problem: 86 x 50 m area, six cylinder obstacles,
/// three-UAV formation, ten waypoints.
pub fn benchmark_scenario() -> ScenarioFile {
    load_scenario_file(
        r#"
        [area]
        lower = [0.0, 0.0, 0.0]
        upper = [86.0, 50.0, 12.0]

        [altitude]
        min_m = 2.0
        max_m = 7.0

        [route]
        start = [8.0, 11.7, 3.0]
        goal = [81.0, 41.1, 5.0]
        waypoints = 10

        [[obstacle]]
        center = [26.0, 19.0]
        radius = 5.0
        [[obstacle]]
        center = [41.0, 25.0]
        radius = 6.0
        [[obstacle]]
        center = [56.0, 31.0]
        radius = 5.0
        [[obstacle]]
        center = [66.0, 41.0]
        radius = 4.0
        [[obstacle]]
        center = [30.0, 34.0]
        radius = 5.0
        [[obstacle]]
        center = [52.0, 12.0]
        radius = 6.0

        [formation]
        count = 3
        offsets = [[0.0, 0.0, 2.0], [3.0, 0.0, -1.0], [-3.0, 0.0, -1.0]]
    "#,
    )
    .expect("benchmark scenario is valid")
}

pub fn benchmark_context() -> EvaluationContext {
    let file = benchmark_scenario();
    EvaluationContext::new(file.scenario, file.formation).expect("context is valid")
}
