//! The planning problem statement and its on-disk configuration format.
//!
//! A scenario bundles the working volume, obstacles, start/goal, altitude
//! band, cost weights, and waypoint count. Scenarios load from a single TOML
//! document so that one file fully reproduces a run. Coordinates may be given
//! either directly in the local metric frame or as WGS-84 geodetic points; the
//! geodetic form is converted with the lower-bound vertex as the origin.
//!
//! The full schema is documented in the repository README next to the example
//! files under `scenarios/`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formation::FormationSpec;
use crate::geo::{geo_to_local, GeoPoint, LocalPoint};
use crate::optimizer::MutationScale;

/// A vertical cylindrical no-fly zone. The cylinder is unbounded in altitude,
/// so only the ground-plane center and radius matter; `center.z` is held at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Obstacle {
    pub center: LocalPoint,
    pub radius: f64,
}

/// Weight coefficients applied to the three cost terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub length: f64,
    pub safety: f64,
    pub task: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self {
            length: 1.0,
            safety: 1.0,
            task: 1.0,
        }
    }
}

/// A validated planning problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub lower_bound: LocalPoint,
    pub upper_bound: LocalPoint,
    pub start: LocalPoint,
    pub goal: LocalPoint,
    pub obstacles: Vec<Obstacle>,
    pub h_min: f64,
    pub h_max: f64,
    pub weights: Weights,
    pub waypoint_count: usize,
    /// Geodetic anchor of the local frame, when known. Required for mission
    /// export, optional for purely local planning.
    pub origin: Option<GeoPoint>,
}

impl Scenario {
    /// True iff `p` lies within the working volume, bounds inclusive.
    pub fn contains(&self, p: LocalPoint) -> bool {
        p.x >= self.lower_bound.x
            && p.x <= self.upper_bound.x
            && p.y >= self.lower_bound.y
            && p.y <= self.upper_bound.y
            && p.z >= self.lower_bound.z
            && p.z <= self.upper_bound.z
    }

    /// Lower/upper bound of the axis backing flattened dimension `k`
    /// (dimension `k` belongs to axis `k % 3`).
    pub fn axis_bounds(&self, k: usize) -> (f64, f64) {
        match k % 3 {
            0 => (self.lower_bound.x, self.upper_bound.x),
            1 => (self.lower_bound.y, self.upper_bound.y),
            _ => (self.lower_bound.z, self.upper_bound.z),
        }
    }

    /// Validate every scenario invariant, reporting the offending field.
    pub fn validate(&self) -> Result<()> {
        for (p, name) in [
            (self.lower_bound, "area.lower"),
            (self.upper_bound, "area.upper"),
            (self.start, "route.start"),
            (self.goal, "route.goal"),
        ] {
            if !p.is_finite() {
                return Err(Error::invalid(name, "coordinates must be finite"));
            }
        }
        if self.lower_bound.x >= self.upper_bound.x
            || self.lower_bound.y >= self.upper_bound.y
            || self.lower_bound.z >= self.upper_bound.z
        {
            return Err(Error::invalid(
                "area",
                "lower bound must be strictly below upper bound on every axis",
            ));
        }
        if !(self.h_min.is_finite() && self.h_max.is_finite()) || self.h_min <= 0.0 {
            return Err(Error::invalid("altitude.min_m", "must be finite and > 0"));
        }
        if self.h_min >= self.h_max {
            return Err(Error::invalid("altitude", "altitude band empty (min >= max)"));
        }
        if self.start == self.goal {
            return Err(Error::invalid("route", "start and goal must differ"));
        }
        if !self.contains(self.start) {
            return Err(Error::invalid("route.start", "outside the working area"));
        }
        if !self.contains(self.goal) {
            return Err(Error::invalid("route.goal", "outside the working area"));
        }
        let w = &self.weights;
        if !(w.length.is_finite() && w.safety.is_finite() && w.task.is_finite())
            || w.length < 0.0
            || w.safety < 0.0
            || w.task < 0.0
        {
            return Err(Error::invalid("weights", "must be finite and nonnegative"));
        }
        if w.length == 0.0 && w.safety == 0.0 && w.task == 0.0 {
            return Err(Error::invalid("weights", "must not all be zero"));
        }
        if self.waypoint_count == 0 {
            return Err(Error::invalid("route.waypoints", "must be at least 1"));
        }
        for (i, obs) in self.obstacles.iter().enumerate() {
            let field = format!("obstacle[{i}]");
            if !obs.center.is_finite() || !obs.radius.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
            if obs.radius <= 0.0 {
                return Err(Error::invalid(format!("{field}.radius"), "nonpositive radius"));
            }
            let inside_xy = obs.center.x >= self.lower_bound.x
                && obs.center.x <= self.upper_bound.x
                && obs.center.y >= self.lower_bound.y
                && obs.center.y <= self.upper_bound.y;
            if !inside_xy {
                return Err(Error::invalid(
                    format!("{field}.center"),
                    "outside the working area",
                ));
            }
        }
        Ok(())
    }
}

/// Optimizer settings carried by the scenario file. Command-line flags
/// override these; they exist so a single file reproduces a run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerDefaults {
    pub population: usize,
    pub iterations: usize,
    pub seed: u64,
    pub subjects: Option<usize>,
    pub mutation_scale: MutationScale,
    pub straight_line_seed: bool,
}

impl Default for OptimizerDefaults {
    fn default() -> Self {
        Self {
            population: 100,
            iterations: 150,
            seed: 42,
            subjects: None,
            mutation_scale: MutationScale::default(),
            straight_line_seed: false,
        }
    }
}

/// Everything a scenario file describes: the problem, the formation flying
/// it, and default optimizer settings. `raw` keeps the original text so
/// reports can embed and digest it.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub scenario: Scenario,
    pub formation: FormationSpec,
    pub optimizer: OptimizerDefaults,
    pub raw: String,
}

/// Parse and validate a scenario document. See the README for the schema.
pub fn load_scenario_file(text: &str) -> Result<ScenarioFile> {
    let cfg: ConfigFile = toml::from_str(text).map_err(Box::new)?;
    cfg.resolve(text)
}

/// Parse a scenario document, returning only the planning problem.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    Ok(load_scenario_file(text)?.scenario)
}

// ---------------------------------------------------------------------------
// Raw on-disk schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    area: AreaConfig,
    altitude: AltitudeConfig,
    route: RouteConfig,
    #[serde(default, rename = "obstacle")]
    obstacles: Vec<ObstacleConfig>,
    #[serde(default)]
    weights: Option<Weights>,
    #[serde(default)]
    formation: Option<FormationConfig>,
    #[serde(default)]
    optimizer: Option<OptimizerConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AreaConfig {
    /// Two opposite geodetic vertices of the working rectangle.
    corner_a: Option<GeoPoint>,
    corner_b: Option<GeoPoint>,
    /// Altitude extent of the working volume, meters above ground.
    z_range: Option<[f64; 2]>,
    /// Local-frame bounds, used instead of the geodetic corners.
    lower: Option<[f64; 3]>,
    upper: Option<[f64; 3]>,
    /// Explicit geodetic anchor when bounds are local.
    origin: Option<GeoPoint>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AltitudeConfig {
    min_m: f64,
    max_m: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeoWithAltitude {
    latitude: f64,
    longitude: f64,
    altitude: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteConfig {
    start: Option<[f64; 3]>,
    goal: Option<[f64; 3]>,
    start_geo: Option<GeoWithAltitude>,
    goal_geo: Option<GeoWithAltitude>,
    waypoints: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleConfig {
    /// Ground-plane center, meters; or use `center_geo`.
    center: Option<[f64; 2]>,
    center_geo: Option<GeoPoint>,
    radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormationConfig {
    count: usize,
    offsets: Option<Vec<[f64; 3]>>,
    radius_m: Option<f64>,
    plane_normal: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizerConfig {
    population: Option<usize>,
    iterations: Option<usize>,
    seed: Option<u64>,
    subjects: Option<usize>,
    /// Chaotic-mutation step size as a fraction of each axis range.
    mutation_scale: Option<f64>,
    /// Chaotic-mutation step size in meters, overriding the fraction.
    mutation_scale_m: Option<f64>,
    straight_line_seed: Option<bool>,
}

impl ConfigFile {
    fn resolve(self, raw: &str) -> Result<ScenarioFile> {
        let (lower, upper, origin) = self.resolve_area()?;

        let to_local = |geo: &GeoWithAltitude, field: &str| -> Result<LocalPoint> {
            let anchor = origin.ok_or_else(|| {
                Error::invalid(
                    field,
                    "geodetic coordinates require geodetic area corners or area.origin",
                )
            })?;
            let p = geo_to_local(anchor, GeoPoint::new(geo.latitude, geo.longitude)?)?;
            Ok(LocalPoint::new(p.x, p.y, geo.altitude))
        };

        let start = match (&self.route.start, &self.route.start_geo) {
            (Some(p), None) => LocalPoint::new(p[0], p[1], p[2]),
            (None, Some(g)) => to_local(g, "route.start_geo")?,
            _ => {
                return Err(Error::invalid(
                    "route.start",
                    "exactly one of `start` or `start_geo` must be given",
                ))
            }
        };
        let goal = match (&self.route.goal, &self.route.goal_geo) {
            (Some(p), None) => LocalPoint::new(p[0], p[1], p[2]),
            (None, Some(g)) => to_local(g, "route.goal_geo")?,
            _ => {
                return Err(Error::invalid(
                    "route.goal",
                    "exactly one of `goal` or `goal_geo` must be given",
                ))
            }
        };

        let mut obstacles = Vec::with_capacity(self.obstacles.len());
        for (i, obs) in self.obstacles.iter().enumerate() {
            let center = match (&obs.center, &obs.center_geo) {
                (Some(c), None) => LocalPoint::new(c[0], c[1], 0.0),
                (None, Some(g)) => {
                    let anchor = origin.ok_or_else(|| {
                        Error::invalid(
                            format!("obstacle[{i}].center_geo"),
                            "geodetic coordinates require geodetic area corners or area.origin",
                        )
                    })?;
                    let p = geo_to_local(anchor, *g)?;
                    LocalPoint::new(p.x, p.y, 0.0)
                }
                _ => {
                    return Err(Error::invalid(
                        format!("obstacle[{i}].center"),
                        "exactly one of `center` or `center_geo` must be given",
                    ))
                }
            };
            obstacles.push(Obstacle {
                center,
                radius: obs.radius,
            });
        }

        let scenario = Scenario {
            lower_bound: lower,
            upper_bound: upper,
            start,
            goal,
            obstacles,
            h_min: self.altitude.min_m,
            h_max: self.altitude.max_m,
            weights: self.weights.unwrap_or_default(),
            waypoint_count: self.route.waypoints,
            origin,
        };
        scenario.validate()?;

        let formation = match &self.formation {
            None => FormationSpec::single(),
            Some(f) => match (&f.offsets, f.radius_m) {
                (Some(offsets), None) => {
                    if offsets.len() != f.count {
                        return Err(Error::invalid(
                            "formation.offsets",
                            format!("expected {} offsets, got {}", f.count, offsets.len()),
                        ));
                    }
                    FormationSpec::from_offsets(offsets.clone())?
                }
                (None, Some(radius)) => {
                    let normal = f.plane_normal.unwrap_or([0.0, 0.0, 1.0]);
                    FormationSpec::regular(f.count, radius, normal)?
                }
                _ => {
                    return Err(Error::invalid(
                        "formation",
                        "exactly one of `offsets` or `radius_m` must be given",
                    ))
                }
            },
        };

        let defaults = OptimizerDefaults::default();
        let optimizer = match &self.optimizer {
            None => defaults,
            Some(o) => {
                let mutation_scale = match (o.mutation_scale_m, o.mutation_scale) {
                    (Some(m), _) => MutationScale::Meters(m),
                    (None, Some(f)) => MutationScale::FractionOfRange(f),
                    (None, None) => defaults.mutation_scale,
                };
                OptimizerDefaults {
                    population: o.population.unwrap_or(defaults.population),
                    iterations: o.iterations.unwrap_or(defaults.iterations),
                    seed: o.seed.unwrap_or(defaults.seed),
                    subjects: o.subjects,
                    mutation_scale,
                    straight_line_seed: o.straight_line_seed.unwrap_or(false),
                }
            }
        };

        Ok(ScenarioFile {
            scenario,
            formation,
            optimizer,
            raw: raw.to_owned(),
        })
    }

    /// Resolve the working volume to local bounds plus an optional geodetic
    /// origin (the lower-bound vertex when corners are geodetic).
    fn resolve_area(&self) -> Result<(LocalPoint, LocalPoint, Option<GeoPoint>)> {
        let a = &self.area;
        match (a.corner_a, a.corner_b, a.lower, a.upper) {
            (Some(ca), Some(cb), None, None) => {
                let z = a.z_range.ok_or_else(|| {
                    Error::invalid("area.z_range", "required with geodetic corners")
                })?;
                let origin = GeoPoint::new(
                    ca.latitude.min(cb.latitude),
                    ca.longitude.min(cb.longitude),
                )?;
                let far = GeoPoint::new(
                    ca.latitude.max(cb.latitude),
                    ca.longitude.max(cb.longitude),
                )?;
                let extent = geo_to_local(origin, far)?;
                let lower = LocalPoint::new(0.0, 0.0, z[0]);
                let upper = LocalPoint::new(extent.x, extent.y, z[1]);
                Ok((lower, upper, Some(origin)))
            }
            (None, None, Some(lo), Some(hi)) => {
                let lower = LocalPoint::new(lo[0], lo[1], lo[2]);
                let upper = LocalPoint::new(hi[0], hi[1], hi[2]);
                if let Some(origin) = a.origin {
                    GeoPoint::new(origin.latitude, origin.longitude)?;
                }
                Ok((lower, upper, a.origin))
            }
            _ => Err(Error::invalid(
                "area",
                "give either both geodetic corners or both local bounds",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        [area]
        lower = [0.0, 0.0, 0.0]
        upper = [100.0, 60.0, 12.0]

        [altitude]
        min_m = 2.0
        max_m = 7.0

        [route]
        start = [5.0, 5.0, 4.0]
        goal = [85.0, 50.0, 4.0]
        waypoints = 10
    "#;

    #[test]
    fn minimal_scenario_loads_with_defaults() {
        let s = load_scenario(MINIMAL).unwrap();
        assert_eq!(s.weights, Weights::default());
        assert_eq!(s.waypoint_count, 10);
        assert!(s.obstacles.is_empty());
        assert!(s.origin.is_none());
        let file = load_scenario_file(MINIMAL).unwrap();
        assert_eq!(file.formation.uav_count(), 1);
        assert_eq!(file.optimizer.population, 100);
        assert_eq!(file.optimizer.iterations, 150);
    }

    #[test]
    fn paper_style_geodetic_scenario() {
        let text = r#"
            [area]
            corner_a = { latitude = 12.2335526, longitude = 109.1144313 }
            corner_b = { latitude = 12.2331044, longitude = 109.1152252 }
            z_range = [0.0, 12.0]

            [altitude]
            min_m = 2.0
            max_m = 7.0

            [route]
            start_geo = { latitude = 12.2332099, longitude = 109.1145051, altitude = 3.0 }
            goal_geo = { latitude = 12.233474, longitude = 109.1151763, altitude = 5.0 }
            waypoints = 10
        "#;
        let s = load_scenario(text).unwrap();
        assert_eq!(s.h_min, 2.0);
        assert_eq!(s.h_max, 7.0);
        // Lower-bound vertex is the origin: componentwise minimum corner.
        let origin = s.origin.unwrap();
        assert_eq!(origin.latitude, 12.2331044);
        assert_eq!(origin.longitude, 109.1144313);
        // Frozen from an independent equirectangular computation.
        assert!((s.upper_bound.x - 86.27318738088975).abs() < 1e-6);
        assert!((s.upper_bound.y - 49.83756612200588).abs() < 1e-6);
        assert!((s.start.x - 8.019852913970805).abs() < 1e-6);
        assert!((s.start.y - 11.731064761011135).abs() < 1e-6);
        assert!((s.goal.x - 80.959219799807).abs() < 1e-6);
        assert!((s.goal.y - 41.09764488772681).abs() < 1e-6);
        assert_eq!(s.start.z, 3.0);
        assert_eq!(s.goal.z, 5.0);
    }

    #[test]
    fn empty_altitude_band_rejected() {
        let text = MINIMAL.replace("max_m = 7.0", "max_m = 2.0");
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("altitude band empty"), "{err}");
    }

    #[test]
    fn nonpositive_obstacle_radius_rejected() {
        let text = format!(
            "{MINIMAL}\n[[obstacle]]\ncenter = [50.0, 30.0]\nradius = 0.0\n"
        );
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("nonpositive radius"), "{err}");
    }

    #[test]
    fn obstacle_outside_area_rejected() {
        let text = format!(
            "{MINIMAL}\n[[obstacle]]\ncenter = [500.0, 30.0]\nradius = 2.0\n"
        );
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("outside the working area"), "{err}");
    }

    #[test]
    fn bounds_check_is_inclusive() {
        let s = load_scenario(MINIMAL).unwrap();
        assert!(s.contains(s.lower_bound));
        assert!(s.contains(s.upper_bound));
        assert!(!s.contains(s.upper_bound.offset_by([1.0, 0.0, 0.0])));
        let mid = LocalPoint::new(
            (s.lower_bound.x + s.upper_bound.x) / 2.0,
            (s.lower_bound.y + s.upper_bound.y) / 2.0,
            (s.lower_bound.z + s.upper_bound.z) / 2.0,
        );
        assert!(s.contains(mid));
    }

    #[test]
    fn start_equal_goal_rejected() {
        let text = MINIMAL.replace("goal = [85.0, 50.0, 4.0]", "goal = [5.0, 5.0, 4.0]");
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("start and goal"), "{err}");
    }

    #[test]
    fn all_zero_weights_rejected() {
        let text = format!("{MINIMAL}\n[weights]\nlength = 0.0\nsafety = 0.0\ntask = 0.0\n");
        let err = load_scenario(&text).unwrap_err();
        assert!(err.to_string().contains("weights"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = format!("{MINIMAL}\ntypo_section = 1\n");
        assert!(load_scenario(&text).is_err());
    }

    #[test]
    fn formation_from_explicit_offsets() {
        let text = format!(
            "{MINIMAL}\n[formation]\ncount = 3\noffsets = [[0.0,0.0,2.0],[3.0,0.0,-1.0],[-3.0,0.0,-1.0]]\n"
        );
        let file = load_scenario_file(&text).unwrap();
        assert_eq!(file.formation.uav_count(), 3);
        assert_eq!(file.formation.offsets()[1], [3.0, 0.0, -1.0]);
    }
}
