//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The scenario file is not syntactically valid TOML (or violates the schema).
    #[error("scenario parse error: {0}")]
    Parse(#[from] Box<toml::de::Error>),

    /// A scenario or parameter field violates an invariant. The field name is
    /// always included so configuration mistakes are attributable.
    #[error("invalid `{field}`: {message}")]
    InvalidField { field: String, message: String },

    #[error("latitude {0} outside [-90, 90] degrees")]
    LatitudeOutOfRange(f64),

    #[error("longitude {0} outside [-180, 180] degrees")]
    LongitudeOutOfRange(f64),

    /// The two points are too far apart for the local tangent-plane projection.
    #[error(
        "points are {separation_m:.0} m apart; the local-plane projection is limited to {limit_m:.0} m"
    )]
    ProjectionRange { separation_m: f64, limit_m: f64 },

    /// Planning cannot start: an endpoint lies inside an obstacle disk.
    #[error(
        "{endpoint} lies inside obstacle {obstacle_index} \
         (horizontal distance {distance_m:.3} m <= radius {radius_m:.3} m)"
    )]
    EndpointInsideObstacle {
        endpoint: &'static str,
        obstacle_index: usize,
        distance_m: f64,
        radius_m: f64,
    },

    /// A local point converts to an out-of-range geodetic coordinate.
    #[error("local point decodes to invalid geodetic coordinate ({latitude}, {longitude})")]
    GeoDecodeOutOfRange { latitude: f64, longitude: f64 },

    /// Waypoint export needs a geodetic anchor but the scenario has none.
    #[error("scenario has no geodetic origin; waypoint export requires one")]
    MissingOrigin,

    #[error("unknown algorithm `{0}` (expected ga, tlbo, theta-pso, or ftlbo)")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            message: message.into(),
        }
    }
}
