//! JSON configuration files. Every field is optional; command-line flags
//! take precedence over the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub family: Option<String>,
    pub id: Option<Vec<String>>,
    pub epsilon: Option<Vec<f64>>,
    pub method: Option<Vec<String>>,
    pub n: Option<Vec<usize>>,
    /// Rate-query parameters such as `"0.3"` or `"2/3:1/3"`.
    pub param: Option<Vec<String>>,
    pub strategy: Option<String>,
    pub resolution: Option<usize>,
    pub tube_radius: Option<f64>,
    pub references: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
    }
}
