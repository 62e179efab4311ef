//! Geodetic coordinates and the local metric frame.
//!
//! Planning happens in a local east/north/up frame measured in meters. Input
//! boundaries and mission exports use WGS-84 latitude/longitude, so this
//! module provides the projection between the two: an equirectangular local
//! tangent plane around an origin point. At the sub-kilometer working scales
//! this planner targets, the projection error is far below centimeter level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean Earth radius in meters used by the local-plane projection.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Hard limit on the separation the local-plane projection accepts.
///
/// Beyond roughly 100 km the flat-plane assumption degrades; the limit has
/// some slack so that one full degree of latitude (~111.2 km) still converts,
/// which keeps round-number test scenarios usable.
pub const MAX_PROJECTION_RANGE_M: f64 = 150_000.0;

/// A WGS-84 latitude/longitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoPoint {
    /// Range-checked constructor.
    pub fn new(latitude: f64, longitude: f64) -> Result<Self> {
        if !latitude.is_finite() || !(-90.0..=90.0).contains(&latitude) {
            return Err(Error::LatitudeOutOfRange(latitude));
        }
        if !longitude.is_finite() || !(-180.0..=180.0).contains(&longitude) {
            return Err(Error::LongitudeOutOfRange(longitude));
        }
        Ok(Self {
            latitude,
            longitude,
        })
    }
}

/// A point in the local frame: meters east (`x`), north (`y`), and altitude
/// above ground (`z`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LocalPoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Translate by a displacement vector in meters.
    pub fn offset_by(&self, d: [f64; 3]) -> Self {
        Self::new(self.x + d[0], self.y + d[1], self.z + d[2])
    }

    /// Euclidean distance in 3D.
    pub fn distance(&self, other: &Self) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        let dz = other.z - self.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Distance in the ground (x-y) plane, ignoring altitude.
    pub fn horizontal_distance(&self, other: &Self) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Project a geodetic point into the local frame anchored at `origin`.
///
/// Equirectangular projection: `x = R * dlon * cos(origin_lat)`,
/// `y = R * dlat`, angles in radians. The result carries `z = 0`; altitude is
/// orthogonal to the projection. Fails when the points are farther apart than
/// [`MAX_PROJECTION_RANGE_M`].
pub fn geo_to_local(origin: GeoPoint, p: GeoPoint) -> Result<LocalPoint> {
    // Revalidate so raw struct literals cannot smuggle bad angles through.
    let origin = GeoPoint::new(origin.latitude, origin.longitude)?;
    let p = GeoPoint::new(p.latitude, p.longitude)?;

    let x = EARTH_RADIUS_M
        * (p.longitude - origin.longitude).to_radians()
        * origin.latitude.to_radians().cos();
    let y = EARTH_RADIUS_M * (p.latitude - origin.latitude).to_radians();

    let separation = (x * x + y * y).sqrt();
    if separation > MAX_PROJECTION_RANGE_M {
        return Err(Error::ProjectionRange {
            separation_m: separation,
            limit_m: MAX_PROJECTION_RANGE_M,
        });
    }
    Ok(LocalPoint::new(x, y, 0.0))
}

/// Inverse of [`geo_to_local`]: recover the geodetic coordinate of a local
/// point (altitude is dropped; callers carry `z` separately).
pub fn local_to_geo(origin: GeoPoint, p: LocalPoint) -> Result<GeoPoint> {
    let origin = GeoPoint::new(origin.latitude, origin.longitude)?;
    let cos_lat = origin.latitude.to_radians().cos();

    let latitude = origin.latitude + (p.y / EARTH_RADIUS_M).to_degrees();
    let longitude = origin.longitude + (p.x / (EARTH_RADIUS_M * cos_lat)).to_degrees();

    if !latitude.is_finite()
        || !longitude.is_finite()
        || !(-90.0..=90.0).contains(&latitude)
        || !(-180.0..=180.0).contains(&longitude)
    {
        return Err(Error::GeoDecodeOutOfRange {
            latitude,
            longitude,
        });
    }
    Ok(GeoPoint {
        latitude,
        longitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geo(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn identity_projection() {
        let o = geo(12.2335526, 109.1144313);
        let p = geo_to_local(o, o).unwrap();
        assert_eq!(p, LocalPoint::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn eastward_displacement_matches_hand_computation() {
        // Independently verified against the haversine formula (agrees to
        // better than 1e-7 m at this separation).
        let o = geo(12.2335526, 109.1144313);
        let p = geo(12.2335526, 109.1152252);
        let local = geo_to_local(o, p).unwrap();
        assert!((local.x - 86.27304105632152).abs() < 1e-9, "x = {}", local.x);
        assert_eq!(local.y, 0.0);
    }

    #[test]
    fn one_degree_of_latitude() {
        let o = geo(10.0, 20.0);
        let p = geo(11.0, 20.0);
        let local = geo_to_local(o, p).unwrap();
        assert!(
            (local.y - 111_194.92664455874).abs() < 1e-6,
            "y = {}",
            local.y
        );
        assert_eq!(local.x, 0.0);
    }

    #[test]
    fn far_apart_points_rejected() {
        let o = geo(10.0, 20.0);
        let p = geo(12.0, 20.0); // ~222 km
        assert!(matches!(
            geo_to_local(o, p),
            Err(Error::ProjectionRange { .. })
        ));
    }

    #[test]
    fn invalid_latitude_rejected() {
        assert!(GeoPoint::new(112.2331044, 109.0).is_err());
        assert!(GeoPoint::new(12.0, 181.0).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn round_trip_at_working_scale() {
        let o = geo(12.2331044, 109.1144313);
        let p = LocalPoint::new(80.959, 41.097, 5.0);
        let g = local_to_geo(o, p).unwrap();
        let back = geo_to_local(o, g).unwrap();
        assert!((back.x - p.x).abs() < 1e-7);
        assert!((back.y - p.y).abs() < 1e-7);
    }

    proptest! {
        // Converting p and p shifted by dlat differ only in y, linearly.
        #[test]
        fn additive_in_latitude(
            olat in -60.0..60.0f64,
            olon in -170.0..170.0f64,
            dlat1 in -0.4..0.4f64,
            dlat2 in -0.4..0.4f64,
            dlon in -0.4..0.4f64,
        ) {
            let o = geo(olat, olon);
            let a = geo_to_local(o, geo(olat + dlat1, olon + dlon)).unwrap();
            let b = geo_to_local(o, geo(olat + dlat1 + dlat2, olon + dlon)).unwrap();
            prop_assert_eq!(a.x, b.x);
            let expected = EARTH_RADIUS_M * dlat2.to_radians();
            prop_assert!((b.y - a.y - expected).abs() < 1e-6);
        }

        #[test]
        fn round_trip_error_below_nanodegree(
            x in -2000.0..2000.0f64,
            y in -2000.0..2000.0f64,
        ) {
            let o = geo(12.2331044, 109.1144313);
            let g = local_to_geo(o, LocalPoint::new(x, y, 0.0)).unwrap();
            let back = geo_to_local(o, g).unwrap();
            // < 1e-9 degrees expressed in meters is ~1e-4 m; we are far below.
            prop_assert!((back.x - x).abs() < 1e-6);
            prop_assert!((back.y - y).abs() < 1e-6);
        }
    }
}
