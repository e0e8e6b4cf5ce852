use std::path::Path;

use serde::Deserialize;

use crate::args::Format;

/// Defaults read from `--config`. Command-line flags and the environment win.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    #[serde(default)]
    pub sample: SampleConfig,
    #[serde(default)]
    pub represent: RepresentConfig,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub c: Option<f64>,
    pub gamma: Option<f64>,
    pub trials: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RepresentConfig {
    pub bit_width: Option<u32>,
    pub attempts: Option<u32>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text =
            std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
