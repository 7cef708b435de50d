//! Loading of the files named on the command line.

use std::fs;
use std::path::Path;

use lifestyle_core::ingest::{AllocationFractions, PoiDatabase, StayPointParams};
use lifestyle_core::{MembershipConfig, PerCategory, RuleBase, TagCatalog};
use serde::de::DeserializeOwned;

use crate::error::{CliError, Result};
use crate::ConfigArgs;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))
}

fn required<'a>(path: &'a Option<std::path::PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required for this command")))
}

impl ConfigArgs {
    pub fn catalog(&self) -> Result<TagCatalog> {
        load_json(required(&self.catalog, "catalog")?)
    }

    pub fn membership(&self) -> Result<MembershipConfig> {
        load_json(required(&self.membership, "membership")?)
    }

    pub fn rules(&self) -> Result<RuleBase> {
        load_json(required(&self.rules, "rules")?)
    }

    pub fn poi_db(&self) -> Result<PoiDatabase> {
        load_json(required(&self.poi_db, "poi-db")?)
    }

    /// All zero when no file is given: home time then counts as leisure.
    pub fn allocation(&self) -> Result<AllocationFractions> {
        match &self.allocation {
            Some(p) => load_json(p),
            None => Ok(AllocationFractions::default()),
        }
    }

    pub fn home_weights(&self) -> Result<PerCategory<f64>> {
        match &self.home_weights {
            Some(p) => load_json(p),
            None => Ok(PerCategory::default()),
        }
    }

    pub fn stay_params(&self) -> Result<StayPointParams> {
        let mut p = StayPointParams::default();
        if let Some(h) = self.day_boundary {
            p.day_boundary_hour = h;
        }
        if let Some(m) = self.dwell_min {
            p.min_dwell_min = m;
        }
        if let Some(d) = self.dist_m {
            p.distance_threshold_m = d;
        }
        if let Some(r) = self.poi_radius_m {
            p.poi_radius_m = r;
            p.home_work_radius_m = p.home_work_radius_m.min(r);
        }
        p.validate()?;
        Ok(p)
    }
}
