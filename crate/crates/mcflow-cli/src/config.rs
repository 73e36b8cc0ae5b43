//! Flat key=value configuration files.
//!
//! Lines are `key = value` (whitespace optional, `#` comments). Values fill
//! options the user did not pass on the command line; explicit flags win.

use std::collections::HashMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut values = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let body = line.split('#').next().unwrap_or("").trim();
                if body.is_empty() {
                    continue;
                }
                let (k, v) = body.split_once('=').ok_or_else(|| {
                    CliError::config(format!(
                        "{}:{}: expected key=value",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Config { values })
    }

    /// Fill an optional field from the config when absent.
    pub fn fill<T: std::str::FromStr>(
        &self,
        slot: &mut Option<T>,
        key: &str,
    ) -> Result<(), CliError>
    where
        T::Err: std::fmt::Display,
    {
        if slot.is_none() {
            if let Some(raw) = self.values.get(key) {
                let parsed = raw
                    .parse::<T>()
                    .map_err(|e| CliError::config(format!("config key '{key}': {e}")))?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }

    pub fn echo(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        let mut keys: Vec<&String> = self.values.keys().collect();
        keys.sort();
        for k in keys {
            map.insert(k.clone(), serde_json::Value::String(self.values[k].clone()));
        }
        serde_json::Value::Object(map)
    }
}
