//! GPS ingestion: dwell segmentation, point-of-interest resolution and the
//! conversion of a trace into a [`DayLog`](crate::model::DayLog).

mod daylog;
mod geo;
#[cfg(feature = "http")]
mod http;
mod poi;
mod stay;

pub use daylog::{analysis_day_start, trace_to_daylog, trace_to_daylog_with, AllocationFractions};
pub use geo::{haversine, LatLon, EARTH_RADIUS_M};
#[cfg(feature = "http")]
pub use http::{NearbyClient, NearbyResponse};
pub use poi::{
    nearest_within, resolve_poi, resolve_with, LatLonFields, PoiDatabase, PoiEntry, PoiResolver,
    Registration,
};
pub use stay::{
    detect_stay_points, drop_speed_outliers, read_trace_csv, write_trace_csv, GpsPoint, StayPoint,
    StayPointParams,
};
