//! Optional defaults from `lcg-engine.toml`.

use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const CONFIG_ENV: &str = "LCG_ENGINE_CONFIG";
pub const CONFIG_FILE: &str = "lcg-engine.toml";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub budget: u64,
    pub population_limit: usize,
    pub entry_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: lcg_core::DEFAULT_BUDGET,
            population_limit: lcg_core::Stepper::default().population_limit,
            entry_cap: lcg_core::DEFAULT_ENTRY_CAP,
        }
    }
}

impl Config {
    /// Reads the file named by `$LCG_ENGINE_CONFIG`, else `./lcg-engine.toml`
    /// if present, else the built-in defaults. A path named by the variable
    /// must exist.
    pub fn load() -> Result<Config, String> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::from_file(&PathBuf::from(p)),
            _ if Path::new(CONFIG_FILE).is_file() => Config::from_file(Path::new(CONFIG_FILE)),
            _ => Ok(Config::default()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c: Config = toml::from_str("budget = 64").unwrap();
        assert_eq!(c.budget, 64);
        assert_eq!(c.entry_cap, lcg_core::DEFAULT_ENTRY_CAP);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<Config>("budgett = 64").is_err());
    }
}
