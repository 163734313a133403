use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::Failure;

/// Inputs of one run; every field may also come from a flag.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_weeks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_value: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub week: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }
}

/// `flag`, else the manifest value, else a usage error naming both.
pub fn pick<T>(flag: Option<T>, manifest: Option<T>, name: &str) -> Result<T, Failure> {
    flag.or(manifest).ok_or_else(|| {
        Failure::Usage(format!(
            "missing --{name} (or `{}` in the manifest)",
            name.replace('-', "_")
        ))
    })
}
