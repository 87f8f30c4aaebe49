//! Optional JSON config file; any flag given on the command line wins.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub init: Option<String>,
    pub t_final: Option<f64>,
    pub dt: Option<f64>,
    pub stride: Option<usize>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub c_im: Option<f64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

pub const DEFAULT_T_FINAL: f64 = 20.0;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_GRID: usize = 21;
pub const DEFAULT_CLASSICAL_INIT: &str = "0,0.6,0.8";
pub const DEFAULT_QUANTUM_INIT: &str = "mixed";
