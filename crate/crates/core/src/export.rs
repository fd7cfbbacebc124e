//! Versioned JSON records for every artifact the toolkit writes.
//!
//! Each record carries `schema_version`; field layouts are documented in
//! `docs/schemas.md`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ui_graph::{ComponentMap, Metric};

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps any record with the schema version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            body,
        }
    }

    /// Unwraps the body, rejecting records from a newer schema.
    pub fn into_body(self) -> Result<T> {
        check_version(self.schema_version)?;
        Ok(self.body)
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == 0 || v > SCHEMA_VERSION {
        return Err(Error::InvalidParameter(format!(
            "unsupported schema_version {v} (this build reads up to {SCHEMA_VERSION})"
        )));
    }
    Ok(())
}

/// Exported form of a [`ComponentMap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentMapRecord {
    pub schema_version: u32,
    pub grid_h: usize,
    pub grid_w: usize,
    pub delta: f64,
    #[serde(default)]
    pub metric: Metric,
    pub k: usize,
    pub labels: Vec<u32>,
}

impl From<&ComponentMap> for ComponentMapRecord {
    fn from(map: &ComponentMap) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            grid_h: map.grid_h(),
            grid_w: map.grid_w(),
            delta: map.delta(),
            metric: map.metric(),
            k: map.k(),
            labels: map.labels().to_vec(),
        }
    }
}

impl ComponentMapRecord {
    pub fn into_map(self) -> Result<ComponentMap> {
        check_version(self.schema_version)?;
        let map = ComponentMap::from_labels(self.grid_h, self.grid_w, &self.labels, self.delta, self.metric)?;
        if map.k() != self.k {
            return Err(Error::InvalidParameter(format!(
                "record claims k={} but labels hold {} components",
                self.k,
                map.k()
            )));
        }
        Ok(map)
    }
}

/// Compact JSON with struct fields in declaration order, so equal values
/// always produce equal bytes.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}
