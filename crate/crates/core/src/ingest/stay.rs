//! GPS traces and dwell segmentation.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::geo::{haversine, LatLon};

/// One GPS fix; `timestamp` is UTC seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpsPoint {
    pub timestamp: i64,
    pub lat: f64,
    pub lon: f64,
}

impl GpsPoint {
    pub fn new(timestamp: i64, lat: f64, lon: f64) -> Result<Self> {
        LatLon::new(lat, lon)?;
        Ok(GpsPoint {
            timestamp,
            lat,
            lon,
        })
    }

    pub fn position(&self) -> LatLon {
        LatLon {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

/// Read a `timestamp,lat,lon` CSV trace.
pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<GpsPoint>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<GpsPoint>() {
        let p = row?;
        out.push(GpsPoint::new(p.timestamp, p.lat, p.lon)?);
    }
    Ok(out)
}

pub fn write_trace_csv<W: std::io::Write>(writer: W, trace: &[GpsPoint]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    for p in trace {
        wtr.serialize(p)?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Segmentation and resolution settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StayPointParams {
    /// Max distance from a run's first point, meters.
    pub distance_threshold_m: f64,
    /// Minimum span of a stay, minutes.
    pub min_dwell_min: f64,
    /// Search radius for points of interest, meters.
    pub poi_radius_m: f64,
    /// Radius around the registered home and work locations, meters.
    pub home_work_radius_m: f64,
    /// Hour of day (UTC) at which an analysis day starts.
    pub day_boundary_hour: u32,
    /// Fixes implying a faster speed from the previous kept fix are dropped, m/s.
    pub max_speed_mps: f64,
    /// Gaps between stays longer than this become travel, minutes.
    pub travel_gap_min: f64,
}

impl Default for StayPointParams {
    fn default() -> Self {
        StayPointParams {
            distance_threshold_m: 200.0,
            min_dwell_min: 20.0,
            poi_radius_m: 75.0,
            home_work_radius_m: 50.0,
            day_boundary_hour: 4,
            max_speed_mps: 70.0,
            travel_gap_min: 5.0,
        }
    }
}

impl StayPointParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("distance threshold", self.distance_threshold_m),
            ("minimum dwell", self.min_dwell_min),
            ("POI radius", self.poi_radius_m),
            ("home/work radius", self.home_work_radius_m),
            ("maximum speed", self.max_speed_mps),
            ("travel gap", self.travel_gap_min),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.home_work_radius_m > self.poi_radius_m {
            return Err(Error::InvalidParams(
                "home/work radius must not exceed the POI radius".into(),
            ));
        }
        if self.day_boundary_hour >= 24 {
            return Err(Error::InvalidParams(format!(
                "day boundary hour {} is not in 0..24",
                self.day_boundary_hour
            )));
        }
        Ok(())
    }
}

/// A span of the trace spent in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StayPoint {
    pub centroid: LatLon,
    pub arrival: i64,
    pub departure: i64,
    pub point_count: usize,
}

impl StayPoint {
    pub fn duration_hours(&self) -> f64 {
        (self.departure - self.arrival) as f64 / 3600.0
    }
}

pub(crate) fn check_order(trace: &[GpsPoint]) -> Result<()> {
    match trace
        .windows(2)
        .position(|w| w[1].timestamp <= w[0].timestamp)
    {
        Some(i) => Err(Error::UnorderedTrace { index: i + 1 }),
        None => Ok(()),
    }
}

/// Drop fixes that would need more than `max_speed_mps` to reach from the
/// previous kept fix.
pub fn drop_speed_outliers(trace: &[GpsPoint], max_speed_mps: f64) -> Vec<GpsPoint> {
    let mut kept: Vec<GpsPoint> = Vec::with_capacity(trace.len());
    for p in trace {
        if let Some(prev) = kept.last() {
            let dt = (p.timestamp - prev.timestamp) as f64;
            if haversine(prev.position(), p.position()) > max_speed_mps * dt {
                continue;
            }
        }
        kept.push(*p);
    }
    kept
}

/// Anchor-based dwell segmentation.
///
/// From an anchor fix, the run extends while consecutive fixes stay within
/// the distance threshold of the anchor. A run spanning at least the minimum
/// dwell becomes a stay point (centroid = mean position) and the next anchor
/// is the first fix after it; otherwise the anchor advances by one.
pub fn detect_stay_points(trace: &[GpsPoint], params: &StayPointParams) -> Result<Vec<StayPoint>> {
    check_order(trace)?;
    let fixes = drop_speed_outliers(trace, params.max_speed_mps);
    let min_dwell_s = params.min_dwell_min * 60.0;
    let mut stays = Vec::new();
    let mut i = 0;
    while i < fixes.len() {
        let anchor = fixes[i].position();
        let mut j = i + 1;
        while j < fixes.len()
            && haversine(anchor, fixes[j].position()) <= params.distance_threshold_m
        {
            j += 1;
        }
        let run = &fixes[i..j];
        let span = (run[run.len() - 1].timestamp - run[0].timestamp) as f64;
        if run.len() >= 2 && span >= min_dwell_s {
            let n = run.len() as f64;
            let lat = run.iter().map(|p| p.lat).sum::<f64>() / n;
            let lon = run.iter().map(|p| p.lon).sum::<f64>() / n;
            stays.push(StayPoint {
                centroid: LatLon { lat, lon },
                arrival: run[0].timestamp,
                departure: run[run.len() - 1].timestamp,
                point_count: run.len(),
            });
            i = j;
        } else {
            i += 1;
        }
    }
    Ok(stays)
}
