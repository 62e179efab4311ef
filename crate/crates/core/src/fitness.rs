//! The multi-objective cost of a candidate centroid path.
//!
//! Three terms are combined by a weighted sum: total path length, obstacle
//! violation, and an altitude task penalty. Violation and altitude terms can
//! be infinite (a segment entering an obstacle disk, or a node at or below
//! ground), which marks a candidate infeasible. Infinite costs still compare
//! under a total order so an optimizer can rank an all-infeasible population.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formation::{CentroidPath, FormationSpec, UavPath};
use crate::geo::LocalPoint;
use crate::scenario::{Obstacle, Scenario, Weights};

/// The three cost terms of one evaluation plus their weighted total.
///
/// `length` is always finite; `safety` and `task` may be `+inf`. The `total`
/// is the weighted sum, with the convention that a zero weight disables its
/// term entirely (so a zero-weighted infinite term does not poison the total).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub length: f64,
    pub safety: f64,
    pub task: f64,
    pub total: f64,
    /// Weighted sum of only the finite terms; tie-breaker between two
    /// infeasible candidates. Not part of the reported cost.
    #[serde(skip)]
    finite_partial: f64,
}

impl PartialEq for CostBreakdown {
    fn eq(&self, other: &Self) -> bool {
        self.length == other.length
            && self.safety == other.safety
            && self.task == other.task
            && self.total == other.total
    }
}

fn weighted(weight: f64, value: f64) -> f64 {
    if weight == 0.0 {
        0.0
    } else {
        weight * value
    }
}

impl CostBreakdown {
    pub fn new(length: f64, safety: f64, task: f64, weights: &Weights) -> Self {
        let wl = weighted(weights.length, length);
        let ws = weighted(weights.safety, safety);
        let wt = weighted(weights.task, task);
        let total = wl + ws + wt;
        let mut finite_partial = 0.0;
        for term in [wl, ws, wt] {
            if term.is_finite() {
                finite_partial += term;
            }
        }
        Self {
            length,
            safety,
            task,
            total,
            finite_partial,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.total.is_finite()
    }

    /// Total order used for every acceptance decision: any finite total beats
    /// any infinite one; two infinite totals compare by the weighted sum of
    /// their finite terms, then by raw length.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self.total.is_finite(), other.total.is_finite()) {
            (true, true) => self.total.total_cmp(&other.total),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self
                .finite_partial
                .total_cmp(&other.finite_partial)
                .then(self.length.total_cmp(&other.length)),
        }
    }

    /// Strictly lower cost in the order above.
    pub fn is_better_than(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Less
    }
}

/// Sum of Euclidean segment lengths over the start..goal node sequence.
pub fn length_cost(path: &CentroidPath) -> f64 {
    length_of_nodes(&path.nodes())
}

pub(crate) fn length_of_nodes(nodes: &[LocalPoint]) -> f64 {
    nodes.windows(2).map(|w| w[0].distance(&w[1])).sum()
}

/// Violation cost of one path segment against one obstacle: with `d` the
/// minimum horizontal distance from the segment to the cylinder axis, the
/// cost is `R/d` outside the cylinder and `+inf` at or inside it.
pub fn segment_obstacle_violation(a: LocalPoint, b: LocalPoint, obs: &Obstacle) -> f64 {
    let d = horizontal_segment_distance(a, b, obs.center);
    if d > obs.radius {
        obs.radius / d
    } else {
        f64::INFINITY
    }
}

/// Minimum distance in the ground plane from segment `ab` to point `c`.
/// A degenerate segment is treated as a point.
fn horizontal_segment_distance(a: LocalPoint, b: LocalPoint, c: LocalPoint) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return a.horizontal_distance(&c);
    }
    let t = (((c.x - a.x) * abx + (c.y - a.y) * aby) / len2).clamp(0.0, 1.0);
    let px = a.x + t * abx;
    let py = a.y + t * aby;
    ((c.x - px).powi(2) + (c.y - py).powi(2)).sqrt()
}

/// Mean violation cost over all segment/obstacle pairs, normalized by
/// (segment count x obstacle count). Zero when there are no obstacles,
/// `+inf` as soon as any segment enters any obstacle disk.
pub fn safety_cost(path: &CentroidPath, scenario: &Scenario) -> f64 {
    safety_of_nodes(&path.nodes(), &scenario.obstacles)
}

pub(crate) fn safety_of_nodes(nodes: &[LocalPoint], obstacles: &[Obstacle]) -> f64 {
    if obstacles.is_empty() {
        return 0.0;
    }
    let segments = nodes.len() - 1;
    let mut sum = 0.0;
    for w in nodes.windows(2) {
        for obs in obstacles {
            let v = segment_obstacle_violation(w[0], w[1], obs);
            if v.is_infinite() {
                return f64::INFINITY;
            }
            sum += v;
        }
    }
    sum / (segments * obstacles.len()) as f64
}

/// Altitude penalty at a single node: zero inside the band, linear outside
/// it, infinite at or below ground. The ground case takes priority.
pub fn altitude_cost_at(h: f64, h_min: f64, h_max: f64) -> f64 {
    if h <= 0.0 {
        f64::INFINITY
    } else if h < h_min {
        h_min - h
    } else if h > h_max {
        h - h_max
    } else {
        0.0
    }
}

/// Total altitude penalty over every node of every UAV path.
pub fn task_cost(uav_paths: &[UavPath], scenario: &Scenario) -> f64 {
    uav_paths
        .iter()
        .flat_map(|p| p.nodes.iter())
        .map(|node| altitude_cost_at(node.z, scenario.h_min, scenario.h_max))
        .sum()
}

pub(crate) fn task_of_nodes(
    nodes: &[LocalPoint],
    offsets: &[[f64; 3]],
    h_min: f64,
    h_max: f64,
) -> f64 {
    let mut sum = 0.0;
    for off in offsets {
        for node in nodes {
            sum += altitude_cost_at(node.z + off[2], h_min, h_max);
        }
    }
    sum
}

/// The fixed problem data every candidate is scored against.
#[derive(Debug, Clone)]
pub struct EvaluationContext {
    pub scenario: Scenario,
    pub formation: FormationSpec,
    /// When set, the safety term is averaged over the derived UAV paths
    /// instead of the virtual centroid path, so the physical vehicles (not
    /// just the group center) must clear every obstacle.
    pub strict_per_uav_safety: bool,
}

impl EvaluationContext {
    pub fn new(scenario: Scenario, formation: FormationSpec) -> Result<Self> {
        scenario.validate()?;
        if formation.uav_count() == 0 {
            return Err(Error::invalid("formation", "needs at least one UAV"));
        }
        Ok(Self {
            scenario,
            formation,
            strict_per_uav_safety: false,
        })
    }

    pub fn with_strict_per_uav_safety(mut self, strict: bool) -> Self {
        self.strict_per_uav_safety = strict;
        self
    }

    /// Flattened decision-vector dimensionality: 3 coordinates per waypoint.
    pub fn dimension(&self) -> usize {
        3 * self.scenario.waypoint_count
    }

    /// Rebuild a centroid path from a flattened waypoint vector.
    pub fn decode(&self, vector: &[f64]) -> CentroidPath {
        debug_assert_eq!(vector.len(), self.dimension());
        let waypoints = vector
            .chunks_exact(3)
            .map(|c| LocalPoint::new(c[0], c[1], c[2]))
            .collect();
        CentroidPath {
            start: self.scenario.start,
            waypoints,
            goal: self.scenario.goal,
        }
    }

    /// Score one candidate path. Pure: identical inputs give identical output.
    pub fn evaluate(&self, path: &CentroidPath) -> CostBreakdown {
        self.evaluate_nodes(&path.nodes())
    }

    /// Score a flattened waypoint vector (the optimizer's hot path).
    pub fn evaluate_vector(&self, vector: &[f64]) -> CostBreakdown {
        let mut nodes = Vec::with_capacity(self.scenario.waypoint_count + 2);
        nodes.push(self.scenario.start);
        nodes.extend(
            vector
                .chunks_exact(3)
                .map(|c| LocalPoint::new(c[0], c[1], c[2])),
        );
        nodes.push(self.scenario.goal);
        self.evaluate_nodes(&nodes)
    }

    fn evaluate_nodes(&self, nodes: &[LocalPoint]) -> CostBreakdown {
        let length = length_of_nodes(nodes);
        let safety = if self.strict_per_uav_safety {
            self.per_uav_safety(nodes)
        } else {
            safety_of_nodes(nodes, &self.scenario.obstacles)
        };
        let task = task_of_nodes(
            nodes,
            self.formation.offsets(),
            self.scenario.h_min,
            self.scenario.h_max,
        );
        CostBreakdown::new(length, safety, task, &self.scenario.weights)
    }

    fn per_uav_safety(&self, nodes: &[LocalPoint]) -> f64 {
        let n = self.formation.uav_count() as f64;
        let mut shifted = Vec::with_capacity(nodes.len());
        let mut sum = 0.0;
        for off in self.formation.offsets() {
            shifted.clear();
            shifted.extend(nodes.iter().map(|p| p.offset_by(*off)));
            let s = safety_of_nodes(&shifted, &self.scenario.obstacles);
            if s.is_infinite() {
                return f64::INFINITY;
            }
            sum += s;
        }
        sum / n
    }
}
