//! Nearby-search over HTTP.
//!
//! `GET {base}/nearby?lat=<lat>&lon=<lon>&radius=<meters>` answers
//! `{ "results": [ { "name", "tag", "lat", "lon" } ] }`. Results outside the
//! radius are ignored; the nearest remaining result wins, ties keeping
//! response order.
//!
//! One client issues one request at a time; share it across threads only
//! behind your own synchronization.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Tag;

use super::geo::LatLon;
use super::poi::{nearest_within, PoiEntry, PoiResolver};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NearbyResponse {
    pub results: Vec<PoiEntry>,
}

pub struct NearbyClient {
    base_url: String,
    client: reqwest::blocking::Client,
}

impl NearbyClient {
    pub fn new(base_url: impl Into<String>) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(10))
            .build()
            .map_err(|e| Error::Nearby(e.to_string()))?;
        Ok(NearbyClient {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            client,
        })
    }

    pub fn search(&self, point: LatLon, radius_m: f64) -> Result<NearbyResponse> {
        let url = format!("{}/nearby", self.base_url);
        let resp = self
            .client
            .get(url)
            .query(&[
                ("lat", point.lat.to_string()),
                ("lon", point.lon.to_string()),
                ("radius", radius_m.to_string()),
            ])
            .send()
            .and_then(|r| r.error_for_status())
            .map_err(|e| Error::Nearby(e.to_string()))?;
        let body = resp.text().map_err(|e| Error::Nearby(e.to_string()))?;
        Ok(serde_json::from_str(&body)?)
    }
}

impl PoiResolver for NearbyClient {
    fn nearest_tag(&self, point: LatLon, radius_m: f64) -> Result<Option<Tag>> {
        let resp = self.search(point, radius_m)?;
        Ok(nearest_within(&resp.results, point, radius_m).map(|e| e.tag.clone()))
    }
}
