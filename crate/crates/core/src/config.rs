//! Search and classifier settings, plus the `key=value` file format that pins
//! them for reproducible sweeps.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How the engine explores rule applications at each node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Try every applicable rule in order; the first one whose children are
    /// all certified wins.
    #[default]
    Backtracking,
    /// Commit to the first applicable rule and never revisit the choice.
    Greedy,
}

impl FromStr for SearchMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "backtracking" => Ok(SearchMode::Backtracking),
            "greedy" => Ok(SearchMode::Greedy),
            other => Err(ConfigError::BadValue {
                key: "mode".into(),
                value: other.into(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Rule applications allowed per query before the search gives up.
    pub node_budget: u64,
    pub mode: SearchMode,
    /// Accept every regime-satisfying genus-zero tuple as a leaf.
    pub rational_base: bool,
    /// Use the `(r + 3) / 2` threshold for the high-dimension exception family.
    pub lengthened_high: bool,
    /// Worker threads for sweeps; `0` lets rayon decide.
    pub jobs: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            node_budget: 10_000_000,
            mode: SearchMode::Backtracking,
            rational_base: true,
            lengthened_high: false,
            jobs: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}")]
    BadValue { key: String, value: String },
}

impl Config {
    /// Applies one `key=value` setting on top of the current values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = || ConfigError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            "node_budget" => self.node_budget = value.parse().map_err(|_| bad())?,
            "mode" => self.mode = value.parse()?,
            "rational_base" => self.rational_base = value.parse().map_err(|_| bad())?,
            "lengthened_high" => self.lengthened_high = value.parse().map_err(|_| bad())?,
            "jobs" => self.jobs = value.parse().map_err(|_| bad())?,
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Parses a config file; blank lines and `#` comments are ignored and
    /// unspecified keys keep their defaults.
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut config = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                text: raw.to_string(),
            })?;
            config.set(key.trim(), value.trim())?;
        }
        Ok(config)
    }
}
