//! Formation geometry: centroid, per-UAV offsets, rule checks, and the
//! derivation of individual UAV paths from a planned centroid path.
//!
//! The group flies a rigid shape: every UAV holds a constant displacement
//! from the formation centroid in the inertial frame, so planning reduces to
//! a single path for the centroid. Offsets can be supplied explicitly or
//! generated as a regular polygon from a formation radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::LocalPoint;

/// The shape of the formation: how many UAVs and where each sits relative to
/// the centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormationSpec {
    uav_count: usize,
    offsets: Vec<[f64; 3]>,
    /// Formation radius the offsets were generated from, when applicable.
    radius: Option<f64>,
}

impl FormationSpec {
    /// A single UAV flying the centroid path itself.
    pub fn single() -> Self {
        Self {
            uav_count: 1,
            offsets: vec![[0.0, 0.0, 0.0]],
            radius: None,
        }
    }

    /// Build from explicit per-UAV offsets, as used for hand-tuned shapes.
    pub fn from_offsets(offsets: Vec<[f64; 3]>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::invalid("formation.offsets", "must not be empty"));
        }
        if offsets.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::invalid("formation.offsets", "must be finite"));
        }
        Ok(Self {
            uav_count: offsets.len(),
            offsets,
            radius: None,
        })
    }

    /// Place `uav_count` offsets on a circle of `radius` in the plane
    /// orthogonal to `plane_normal`, equally spaced in angle and starting at
    /// the up-most in-plane direction.
    ///
    /// The construction guarantees `|offset_n| = radius` for every UAV, equal
    /// adjacent spacing of `2 * radius * sin(pi / N)`, and a zero offset sum.
    pub fn regular(uav_count: usize, radius: f64, plane_normal: [f64; 3]) -> Result<Self> {
        if uav_count < 2 {
            return Err(Error::invalid("formation.count", "regular formations need >= 2 UAVs"));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid("formation.radius_m", "must be finite and > 0"));
        }
        let norm = (plane_normal[0].powi(2) + plane_normal[1].powi(2) + plane_normal[2].powi(2))
            .sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid("formation.plane_normal", "must be a nonzero vector"));
        }
        let n = [
            plane_normal[0] / norm,
            plane_normal[1] / norm,
            plane_normal[2] / norm,
        ];

        // First basis vector: the in-plane direction closest to world-up, so
        // the first UAV sits at the top of the ring. For horizontal rings
        // (normal along z) "up" degenerates; fall back to north.
        let up_in_plane = [-n[0] * n[2], -n[1] * n[2], 1.0 - n[2] * n[2]];
        let up_len =
            (up_in_plane[0].powi(2) + up_in_plane[1].powi(2) + up_in_plane[2].powi(2)).sqrt();
        let u = if up_len > 1e-9 {
            [
                up_in_plane[0] / up_len,
                up_in_plane[1] / up_len,
                up_in_plane[2] / up_len,
            ]
        } else {
            let north = [-n[1] * n[0], 1.0 - n[1] * n[1], -n[1] * n[2]];
            let len = (north[0].powi(2) + north[1].powi(2) + north[2].powi(2)).sqrt();
            [north[0] / len, north[1] / len, north[2] / len]
        };
        // Second basis vector chosen so angles advance the way the first
        // example ring does: v = u x n.
        let v = [
            u[1] * n[2] - u[2] * n[1],
            u[2] * n[0] - u[0] * n[2],
            u[0] * n[1] - u[1] * n[0],
        ];

        let offsets = (0..uav_count)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / uav_count as f64;
                let (s, c) = angle.sin_cos();
                [
                    radius * (c * u[0] + s * v[0]),
                    radius * (c * u[1] + s * v[1]),
                    radius * (c * u[2] + s * v[2]),
                ]
            })
            .collect();

        Ok(Self {
            uav_count,
            offsets,
            radius: Some(radius),
        })
    }

    pub fn uav_count(&self) -> usize {
        self.uav_count
    }

    pub fn offsets(&self) -> &[[f64; 3]] {
        &self.offsets
    }

    /// Radius the offsets were generated from, if any.
    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// Componentwise sum of all offsets. Zero means UAV paths average back to
    /// the centroid path exactly.
    pub fn offset_sum(&self) -> [f64; 3] {
        let mut sum = [0.0; 3];
        for o in &self.offsets {
            sum[0] += o[0];
            sum[1] += o[1];
            sum[2] += o[2];
        }
        sum
    }
}

/// Geometric mean position of a set of points.
pub fn centroid(positions: &[LocalPoint]) -> Result<LocalPoint> {
    if positions.is_empty() {
        return Err(Error::invalid("positions", "centroid of an empty set"));
    }
    let n = positions.len() as f64;
    let mut sum = LocalPoint::new(0.0, 0.0, 0.0);
    for p in positions {
        sum.x += p.x;
        sum.y += p.y;
        sum.z += p.z;
    }
    Ok(LocalPoint::new(sum.x / n, sum.y / n, sum.z / n))
}

/// The planned trajectory of the formation centroid: fixed start and goal
/// with `m` free interior waypoints in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidPath {
    pub start: LocalPoint,
    pub waypoints: Vec<LocalPoint>,
    pub goal: LocalPoint,
}

impl CentroidPath {
    pub fn new(start: LocalPoint, waypoints: Vec<LocalPoint>, goal: LocalPoint) -> Result<Self> {
        if !start.is_finite() || !goal.is_finite() || waypoints.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("path", "nodes must be finite"));
        }
        Ok(Self {
            start,
            waypoints,
            goal,
        })
    }

    /// The full node sequence start, W_1..W_m, goal (`m + 2` nodes).
    pub fn nodes(&self) -> Vec<LocalPoint> {
        let mut nodes = Vec::with_capacity(self.waypoints.len() + 2);
        nodes.push(self.start);
        nodes.extend_from_slice(&self.waypoints);
        nodes.push(self.goal);
        nodes
    }

    pub fn node_count(&self) -> usize {
        self.waypoints.len() + 2
    }

    pub fn segment_count(&self) -> usize {
        self.waypoints.len() + 1
    }
}

/// One UAV's path: the centroid path translated by that UAV's offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavPath {
    /// 1-based index of the UAV within the formation.
    pub uav_index: usize,
    pub nodes: Vec<LocalPoint>,
}

/// Translate the centroid path by each UAV's offset.
pub fn derive_uav_paths(path: &CentroidPath, spec: &FormationSpec) -> Vec<UavPath> {
    let nodes = path.nodes();
    spec.offsets()
        .iter()
        .enumerate()
        .map(|(i, off)| UavPath {
            uav_index: i + 1,
            nodes: nodes.iter().map(|p| p.offset_by(*off)).collect(),
        })
        .collect()
}

/// Per-UAV compliance with the two formation rules: distance to centroid
/// equal to the formation radius, and equal distance to the two adjacent
/// neighbors (cyclic order of the offset list).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormationRuleReport {
    /// Radius the centroid-distance rule is checked against: the generating
    /// radius when known, otherwise the mean centroid distance.
    pub radius_reference: f64,
    pub tolerance: f64,
    pub checks: Vec<UavRuleCheck>,
    pub max_radius_error: f64,
    pub max_neighbor_mismatch: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UavRuleCheck {
    pub uav_index: usize,
    /// d_n: distance from this UAV to the centroid of the offsets.
    pub centroid_distance: f64,
    /// |d_n - radius_reference|
    pub radius_error: f64,
    /// | |P_n - P_prev| - |P_n - P_next| | over the cyclic neighbor ring.
    pub neighbor_mismatch: f64,
}

/// Check the formation rules. A failing check is a report, not an error:
/// hand-tuned formations may deliberately bend the rules.
pub fn check_formation_rules(spec: &FormationSpec, tolerance: f64) -> FormationRuleReport {
    let n = spec.uav_count();
    let offsets = spec.offsets();

    // Distances are measured from the actual centroid of the offsets, which
    // is the origin only when the offsets sum to zero.
    let mean = {
        let s = spec.offset_sum();
        [s[0] / n as f64, s[1] / n as f64, s[2] / n as f64]
    };
    let dist = |a: &[f64; 3], b: &[f64; 3]| -> f64 {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    };
    let centroid_distances: Vec<f64> = offsets.iter().map(|o| dist(o, &mean)).collect();

    let radius_reference = spec
        .radius()
        .unwrap_or_else(|| centroid_distances.iter().sum::<f64>() / n as f64);

    let checks: Vec<UavRuleCheck> = (0..n)
        .map(|i| {
            let neighbor_mismatch = if n >= 3 {
                let prev = (i + n - 1) % n;
                let next = (i + 1) % n;
                (dist(&offsets[i], &offsets[prev]) - dist(&offsets[i], &offsets[next])).abs()
            } else {
                0.0
            };
            UavRuleCheck {
                uav_index: i + 1,
                centroid_distance: centroid_distances[i],
                radius_error: (centroid_distances[i] - radius_reference).abs(),
                neighbor_mismatch,
            }
        })
        .collect();

    let max_radius_error = checks.iter().map(|c| c.radius_error).fold(0.0, f64::max);
    let max_neighbor_mismatch = checks
        .iter()
        .map(|c| c.neighbor_mismatch)
        .fold(0.0, f64::max);

    FormationRuleReport {
        radius_reference,
        tolerance,
        pass: max_radius_error <= tolerance && max_neighbor_mismatch <= tolerance,
        checks,
        max_radius_error,
        max_neighbor_mismatch,
    }
}
