use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::construction::CheeseConfig;
use crate::error::{CheeseError, Result};

pub const CONFIG_FORMAT: &str = "swiss-cheese-config";
pub const CONFIG_VERSION: u32 = 1;

/// On-disk configuration: a versioned JSON document. Floats are written in
/// shortest round-trip form, so reading reproduces every bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub format: String,
    pub format_version: u32,
    pub config: CheeseConfig,
}

impl ConfigFile {
    pub fn new(config: CheeseConfig) -> Self {
        ConfigFile {
            format: CONFIG_FORMAT.to_string(),
            format_version: CONFIG_VERSION,
            config,
        }
    }
}

pub fn config_to_string(cfg: &CheeseConfig) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&ConfigFile::new(cfg.clone()))?;
    s.push('\n');
    Ok(s)
}

pub fn config_from_str(text: &str) -> Result<CheeseConfig> {
    let file: ConfigFile = serde_json::from_str(text)?;
    if file.format != CONFIG_FORMAT {
        return Err(CheeseError::Format(format!("not a configuration file: format {:?}", file.format)));
    }
    if file.format_version != CONFIG_VERSION {
        return Err(CheeseError::Format(format!(
            "unsupported configuration version {}",
            file.format_version
        )));
    }
    file.config.validate()?;
    Ok(file.config)
}

pub fn write_config(path: &Path, cfg: &CheeseConfig) -> Result<()> {
    std::fs::write(path, config_to_string(cfg)?)?;
    Ok(())
}

pub fn read_config(path: &Path) -> Result<CheeseConfig> {
    config_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{assemble_cheese, Caps, StubWermer};
    use std::f64::consts::PI;

    fn sample() -> CheeseConfig {
        assemble_cheese(4.0 * PI * 64.0, 6, 3, &StubWermer { per_level: 2, seed: 1 }, Caps { n_cap: 5, disc_cap: 1 << 20 })
            .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let cfg = sample();
        let text = config_to_string(&cfg).unwrap();
        let back = config_from_str(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(config_to_string(&back).unwrap(), text);
    }

    #[test]
    fn version_and_format_checked() {
        let text = config_to_string(&sample()).unwrap();
        let bumped = text.replacen("\"format_version\": 1", "\"format_version\": 2", 1);
        assert!(matches!(config_from_str(&bumped), Err(CheeseError::Format(_))));
        let other = text.replacen(CONFIG_FORMAT, "something-else", 1);
        assert!(matches!(config_from_str(&other), Err(CheeseError::Format(_))));
        assert!(matches!(config_from_str("{"), Err(CheeseError::Format(_))));
    }

    #[test]
    fn tampered_ledger_rejected() {
        let mut cfg = sample();
        cfg.ledger.mckissick_boundary_realized *= 2.0;
        let text = serde_json::to_string(&ConfigFile::new(cfg)).unwrap();
        assert!(matches!(config_from_str(&text), Err(CheeseError::Budget(_))));
    }
}
