//! Path planning for UAV formations.
//!
//! The planner computes a minimum-cost, obstacle-free 3D path for the
//! centroid of a UAV group and derives per-UAV paths that hold a fixed
//! formation shape around it. The search minimizes a weighted fitness over
//! path length, obstacle violation, and an altitude task band, using a
//! teaching-learning-based optimizer enhanced with chaotic mutation, elite
//! replacement, and per-waypoint learning (FTLBO). Reference GA, plain TLBO,
//! and phase-angle PSO implementations run against the identical fitness for
//! benchmarking.
//!
//! Module map:
//! - [`scenario`]: the planning problem and its TOML file format
//! - [`geo`]: WGS-84 to local-frame projection
//! - [`formation`]: offsets, rule checks, per-UAV path derivation
//! - [`fitness`]: the cost terms and their total order
//! - [`optimizer`]: TLBO and FTLBO
//! - [`baselines`]: GA and theta-PSO
//! - [`harness`]: plan/compare orchestration and artifact export
//! - [`waypoints`]: mission-file export

pub mod baselines;
pub mod error;
pub mod fitness;
pub mod formation;
pub mod geo;
pub mod harness;
pub mod optimizer;
pub mod scenario;
pub mod waypoints;

pub use error::{Error, Result};
pub use fitness::{CostBreakdown, EvaluationContext};
pub use formation::{CentroidPath, FormationSpec, UavPath};
pub use geo::{GeoPoint, LocalPoint};
pub use harness::{Algorithm, BudgetMode, HarnessParams};
pub use optimizer::{ConvergenceRecord, MutationScale, RunOutcome, StopCondition, Student};
pub use scenario::{load_scenario, load_scenario_file, Obstacle, Scenario, ScenarioFile, Weights};
