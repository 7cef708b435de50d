//! Point-of-interest lookup with home and work registration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Tag;

use super::geo::{haversine, LatLon};
use super::stay::StayPointParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoi")]
pub struct PoiEntry {
    pub name: String,
    #[serde(flatten)]
    pub location: LatLonFields,
    pub tag: Tag,
}

/// Flat `lat`/`lon` fields as used in the POI and nearby-search JSON.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatLonFields {
    pub lat: f64,
    pub lon: f64,
}

impl LatLonFields {
    pub fn position(&self) -> LatLon {
        LatLon {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

#[derive(Deserialize)]
struct RawPoi {
    name: String,
    lat: f64,
    lon: f64,
    tag: Tag,
}

impl TryFrom<RawPoi> for PoiEntry {
    type Error = Error;

    fn try_from(raw: RawPoi) -> Result<Self> {
        Ok(PoiEntry::new(
            raw.name,
            LatLon::new(raw.lat, raw.lon)?,
            raw.tag,
        ))
    }
}

impl PoiEntry {
    pub fn new(name: impl Into<String>, location: LatLon, tag: Tag) -> Self {
        PoiEntry {
            name: name.into(),
            location: LatLonFields {
                lat: location.lat,
                lon: location.lon,
            },
            tag,
        }
    }

    pub fn position(&self) -> LatLon {
        self.location.position()
    }
}

/// The user's registered home and work locations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Registration {
    pub home: LatLon,
    pub work: LatLon,
}

/// Offline POI database.
///
/// JSON form: `{ "home": [lat, lon], "work": [lat, lon], "pois": [ { "name", "lat", "lon", "tag" } ] }`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PoiDatabase {
    #[serde(default)]
    pub home: Option<LatLon>,
    #[serde(default)]
    pub work: Option<LatLon>,
    #[serde(default)]
    pub pois: Vec<PoiEntry>,
}

impl PoiDatabase {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn registration(&self) -> Result<Registration> {
        Ok(Registration {
            home: self.home.ok_or(Error::MissingRegistration("home"))?,
            work: self.work.ok_or(Error::MissingRegistration("work"))?,
        })
    }
}

/// Source of points of interest near a position.
pub trait PoiResolver {
    /// Tag of the nearest point of interest within `radius_m`, if any.
    fn nearest_tag(&self, point: LatLon, radius_m: f64) -> Result<Option<Tag>>;
}

/// Nearest entry within `radius_m`; equal distances keep the earlier entry.
pub fn nearest_within<'a, I>(entries: I, point: LatLon, radius_m: f64) -> Option<&'a PoiEntry>
where
    I: IntoIterator<Item = &'a PoiEntry>,
{
    let mut best: Option<(f64, &PoiEntry)> = None;
    for e in entries {
        let d = haversine(point, e.position());
        if d <= radius_m && best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, e));
        }
    }
    best.map(|(_, e)| e)
}

impl PoiResolver for PoiDatabase {
    fn nearest_tag(&self, point: LatLon, radius_m: f64) -> Result<Option<Tag>> {
        Ok(nearest_within(&self.pois, point, radius_m).map(|e| e.tag.clone()))
    }
}

/// Registered home first, then registered work, then the nearest point of
/// interest, else `unknown`.
pub fn resolve_with<R: PoiResolver + ?Sized>(
    registration: &Registration,
    resolver: &R,
    point: LatLon,
    params: &StayPointParams,
) -> Result<Tag> {
    if haversine(point, registration.home) <= params.home_work_radius_m {
        return Ok(Tag::home());
    }
    if haversine(point, registration.work) <= params.home_work_radius_m {
        return Tag::new(Tag::WORK);
    }
    match resolver.nearest_tag(point, params.poi_radius_m)? {
        Some(tag) => Ok(tag),
        None => Tag::new(Tag::UNKNOWN),
    }
}

pub fn resolve_poi(db: &PoiDatabase, point: LatLon, params: &StayPointParams) -> Result<Tag> {
    resolve_with(&db.registration()?, db, point, params)
}
