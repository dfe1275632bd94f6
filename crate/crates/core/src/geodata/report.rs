use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::UNIX_EPOCH;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geodata::io::{atomic_write, read_to_string};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalysisKind {
    Slope,
    Aspect,
    PlanCurvature,
    ProfileCurvature,
    Correlation,
    TrendSurface,
    Idw,
    Variogram,
    Kriging,
    Nurbs,
    Heatmap,
    NetworkIndices,
    Route,
    Components,
    Neighbors,
    Geocode,
    AddressRoute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub inputs: Vec<InputDigest>,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl Provenance {
    /// Digests every input file. The timestamp is `SOURCE_DATE_EPOCH` when
    /// set, otherwise the newest modification time among the inputs, so
    /// repeated runs over unchanged files produce identical reports.
    pub fn for_inputs<P: AsRef<Path>>(paths: &[P]) -> Result<Self> {
        let mut inputs = Vec::with_capacity(paths.len());
        let mut newest = 0i64;
        for p in paths {
            let p = p.as_ref();
            let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
            inputs.push(InputDigest {
                path: p.display().to_string(),
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
            let mtime = fs::metadata(p)
                .and_then(|m| m.modified())
                .ok()
                .and_then(|t| t.duration_since(UNIX_EPOCH).ok())
                .map_or(0, |d| d.as_secs() as i64);
            newest = newest.max(mtime);
        }
        let secs = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse::<i64>().ok())
            .unwrap_or(newest);
        Ok(Provenance {
            inputs,
            timestamp: rfc3339(secs),
        })
    }
}

fn rfc3339(secs: i64) -> String {
    chrono::DateTime::from_timestamp(secs, 0)
        .unwrap_or_default()
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}

/// Persisted result of one analysis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub analysis: AnalysisKind,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: Value,
    pub provenance: Provenance,
}

impl AnalysisReport {
    pub fn new(analysis: AnalysisKind, outputs: Value, provenance: Provenance) -> Self {
        AnalysisReport {
            analysis,
            parameters: BTreeMap::new(),
            outputs,
            provenance,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), self.to_json().as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&read_to_string(path.as_ref())?)
    }
}
