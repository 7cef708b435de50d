//! Trace to day log: stay points become tagged visits, home stays become the
//! home profile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CategoryId, DayLog, HomeProfile, PerCategory, Tag, Visit, HOURS_EPS};

use super::poi::{resolve_with, PoiDatabase, PoiResolver, Registration};
use super::stay::{check_order, detect_stay_points, GpsPoint, StayPointParams};

const DAY_S: i64 = 86_400;

/// Start (UTC seconds) of the analysis day containing `ts`.
pub fn analysis_day_start(ts: i64, boundary_hour: u32) -> i64 {
    let offset = i64::from(boundary_hour) * 3600;
    (ts - offset).div_euclid(DAY_S) * DAY_S + offset
}

/// Share of home time spent on each category. Shares sum to at most 1; the
/// rest of home time counts as leisure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PerCategory<f64>", into = "PerCategory<f64>")]
pub struct AllocationFractions(PerCategory<f64>);

impl AllocationFractions {
    pub fn new(fractions: PerCategory<f64>) -> Result<Self> {
        for (cat, f) in fractions.iter() {
            if !f.is_finite() || !(0.0..=1.0).contains(f) {
                return Err(Error::InvalidAllocation(format!(
                    "{cat} fraction {f} is outside [0, 1]"
                )));
            }
        }
        let total: f64 = fractions.iter().map(|(_, f)| *f).sum();
        if total > 1.0 + HOURS_EPS {
            return Err(Error::InvalidAllocation(format!(
                "fractions sum to {total}, more than 1"
            )));
        }
        Ok(AllocationFractions(fractions))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn get(&self, cat: CategoryId) -> f64 {
        self.0[cat]
    }
}

impl TryFrom<PerCategory<f64>> for AllocationFractions {
    type Error = Error;

    fn try_from(p: PerCategory<f64>) -> Result<Self> {
        AllocationFractions::new(p)
    }
}

impl From<AllocationFractions> for PerCategory<f64> {
    fn from(a: AllocationFractions) -> Self {
        a.0
    }
}

/// Convert one analysis day of GPS fixes into a [`DayLog`] using the offline
/// database.
pub fn trace_to_daylog(
    trace: &[GpsPoint],
    db: &PoiDatabase,
    params: &StayPointParams,
    fractions: &AllocationFractions,
    home_weights: &PerCategory<f64>,
) -> Result<DayLog> {
    trace_to_daylog_with(
        trace,
        &db.registration()?,
        db,
        params,
        fractions,
        home_weights,
    )
}

/// As [`trace_to_daylog`], with any POI resolver.
///
/// Stays within the home radius add to total home time; every other stay is
/// a visit tagged by the resolver (`unknown` when nothing is in range, which
/// the catalog routes to `other`). Gaps between stays longer than the travel
/// threshold become `travel` visits. Consecutive visits with the same tag are
/// merged.
pub fn trace_to_daylog_with<R: PoiResolver + ?Sized>(
    trace: &[GpsPoint],
    registration: &Registration,
    resolver: &R,
    params: &StayPointParams,
    fractions: &AllocationFractions,
    home_weights: &PerCategory<f64>,
) -> Result<DayLog> {
    params.validate()?;
    check_order(trace)?;
    if let (Some(first), Some(last)) = (trace.first(), trace.last()) {
        let day_start = analysis_day_start(first.timestamp, params.day_boundary_hour);
        // the closing boundary instant still belongs to the day
        if last.timestamp > day_start + DAY_S {
            return Err(Error::TraceSpansDays { day_start });
        }
    }

    let stays = detect_stay_points(trace, params)?;
    let travel_gap_s = params.travel_gap_min * 60.0;
    let mut segments: Vec<Visit> = Vec::with_capacity(stays.len() * 2);
    let mut prev_departure: Option<i64> = None;
    for stay in &stays {
        if let Some(dep) = prev_departure {
            let gap = stay.arrival - dep;
            if gap as f64 > travel_gap_s {
                push_merged(&mut segments, Tag::new(Tag::TRAVEL)?, dep, gap);
            }
        }
        let tag = resolve_with(registration, resolver, stay.centroid, params)?;
        push_merged(
            &mut segments,
            tag,
            stay.arrival,
            stay.departure - stay.arrival,
        );
        prev_departure = Some(stay.departure);
    }

    let (home, visits): (Vec<Visit>, Vec<Visit>) =
        segments.into_iter().partition(|v| v.tag.is_home());
    let home_hours: f64 = home.iter().map(|v| v.hours).sum();
    let allocations = PerCategory::from_fn(|c| fractions.get(c) * home_hours);
    let profile = HomeProfile::new(home_hours, allocations, *home_weights)?;
    DayLog::new(visits, profile)
}

fn push_merged(out: &mut Vec<Visit>, tag: Tag, start: i64, seconds: i64) {
    let hours = seconds as f64 / 3600.0;
    match out.last_mut() {
        Some(last) if last.tag == tag => last.hours += hours,
        _ => out.push(Visit {
            tag,
            hours,
            start: Some(start),
        }),
    }
}
