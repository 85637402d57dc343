use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{Error, Result};

/// Record of one CLI invocation: the configurations it ran (as TOML, in the
/// same form `arm run` reads) and the files it wrote.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub configs: Vec<ConfigEcho>,
    pub artifacts: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub name: String,
    pub toml: String,
}

impl ConfigEcho {
    pub fn new(name: impl Into<String>, cfg: &SimConfig) -> Self {
        ConfigEcho {
            name: name.into(),
            toml: cfg.to_toml_string(),
        }
    }

    pub fn parse(&self) -> Result<SimConfig> {
        SimConfig::from_toml_str(&self.toml, Path::new("."))
    }
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            ..RunManifest::default()
        }
    }

    pub fn set_duration(&mut self, elapsed: Duration) {
        self.wall_clock_seconds = elapsed.as_secs_f64();
    }

    /// Every listed artifact that is missing or empty.
    pub fn missing_artifacts(&self) -> Vec<&Path> {
        self.artifacts
            .iter()
            .filter(|p| std::fs::metadata(p).map_or(true, |m| m.len() == 0))
            .map(PathBuf::as_path)
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }
}
