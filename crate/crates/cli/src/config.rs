//! JSON config file. Keys mirror the long flag names with `_` for `-`.

use std::path::Path;

use bellcat_core::{LhvModel, SearchConfig};
use serde::Deserialize;

use crate::args::{NormArg, PolArg, Space};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SpinLit {
    Text(String),
    Int(u32),
}

impl SpinLit {
    pub fn as_literal(&self) -> String {
        match self {
            SpinLit::Text(s) => s.clone(),
            SpinLit::Int(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DirLit {
    Text(String),
    Pair([f64; 2]),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Id(String),
    Model(LhvModel),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub s: Option<SpinLit>,
    pub pol: Option<PolArg>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub a: Option<DirLit>,
    pub b: Option<DirLit>,
    pub c: Option<DirLit>,
    pub space: Option<Space>,
    pub normalization: Option<NormArg>,
    pub sweep: Option<Vec<String>>,
    pub search: Option<SearchConfig>,
    pub model: Option<ModelSpec>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub exhaustive: Option<bool>,
    pub grid_points: Option<usize>,
    pub deg: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}
