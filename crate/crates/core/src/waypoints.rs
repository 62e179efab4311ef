//! Mission waypoint files for ground-control upload.
//!
//! Planned paths are exported in the tab-separated `QGC WPL 110` format that
//! Mission Planner and QGroundControl read: a header line, then one line per
//! mission item with sequence number, current flag, coordinate frame, command
//! code, four parameters, latitude, longitude, relative altitude, and the
//! autocontinue flag. The first item is the path's start location and is
//! flagged current.

use crate::error::{Error, Result};
use crate::formation::UavPath;
use crate::geo::{local_to_geo, GeoPoint};

/// MAVLink command: navigate to waypoint.
pub const NAV_WAYPOINT_COMMAND: u16 = 16;
/// MAVLink frame: global latitude/longitude with altitude relative to home.
const GLOBAL_RELATIVE_ALT_FRAME: u8 = 3;

/// One mission line: where to fly and what to do there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionItem {
    pub sequence: u32,
    pub latitude: f64,
    pub longitude: f64,
    /// Meters above the home/ground reference, i.e. the planned `z`.
    pub relative_altitude: f64,
    pub command: u16,
}

/// Output format tag for [`export_waypoints`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaypointFormat {
    #[default]
    QgcWpl110,
}

/// Convert a planned UAV path into mission items anchored at the scenario's
/// geodetic origin. Fails if any node decodes outside valid latitude or
/// longitude.
pub fn mission_items(path: &UavPath, origin: GeoPoint) -> Result<Vec<MissionItem>> {
    path.nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let geo = local_to_geo(origin, *node)?;
            Ok(MissionItem {
                sequence: i as u32,
                latitude: geo.latitude,
                longitude: geo.longitude,
                relative_altitude: node.z,
                command: NAV_WAYPOINT_COMMAND,
            })
        })
        .collect()
}

/// Render a planned UAV path as a mission file ready for upload.
pub fn export_waypoints(
    path: &UavPath,
    origin: GeoPoint,
    format: WaypointFormat,
) -> Result<String> {
    if path.nodes.is_empty() {
        return Err(Error::invalid("path", "has no nodes to export"));
    }
    let items = mission_items(path, origin)?;
    match format {
        WaypointFormat::QgcWpl110 => Ok(render_qgc_wpl110(&items)),
    }
}

fn render_qgc_wpl110(items: &[MissionItem]) -> String {
    let mut out = String::from("QGC WPL 110\n");
    for item in items {
        let current = u8::from(item.sequence == 0);
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t0.000000\t0.000000\t0.000000\t0.000000\t{:.8}\t{:.8}\t{:.6}\t1\n",
            item.sequence,
            current,
            GLOBAL_RELATIVE_ALT_FRAME,
            item.command,
            item.latitude,
            item.longitude,
            item.relative_altitude,
        ));
    }
    out
}
