//! `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//! `max_factorial_n`, `max_sparse_n`, `max_exponent`, `factor_limit`,
//! `precision`, `max_precision`, `show_radius`.

use std::collections::BTreeMap;
use std::path::Path;

use digitsum::{Caps, Precision};

pub const CONFIG_ENV: &str = "DIGITSUM_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Settings {
    pub caps: Caps,
    pub precision: Precision,
    pub show_radius: bool,
}

/// Overrides from flags; `None` keeps the configured value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub max_factorial_n: Option<u64>,
    pub max_sparse_n: Option<u32>,
    pub max_exponent: Option<u64>,
    pub factor_limit: Option<u64>,
    pub precision: Option<u32>,
    pub max_precision: Option<u32>,
    pub show_radius: bool,
}

fn parse_entries(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", i + 1));
        };
        entries.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(entries)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: invalid value {value:?}"))
}

impl Settings {
    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut s = Settings::default();
        for (key, value) in parse_entries(text)? {
            match key.as_str() {
                "max_factorial_n" => s.caps.max_factorial_n = number(&key, &value)?,
                "max_sparse_n" => s.caps.max_sparse_n = number(&key, &value)?,
                "max_exponent" => s.caps.max_exponent = number(&key, &value)?,
                "factor_limit" => s.caps.factor_limit = number(&key, &value)?,
                "precision" => s.precision.start = number(&key, &value)?,
                "max_precision" => s.precision.max = number(&key, &value)?,
                "show_radius" => s.show_radius = number(&key, &value)?,
                other => return Err(format!("unknown key {other:?}")),
            }
        }
        Ok(s)
    }

    /// Reads `path`, or `$DIGITSUM_CONFIG` when `path` is `None`; defaults otherwise.
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
        let path = path.map(Path::to_path_buf).or(env_path.map(Into::into));
        match path {
            None => Ok(Settings::default()),
            Some(p) => {
                let text =
                    std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                Settings::from_text(&text).map_err(|e| format!("{}: {e}", p.display()))
            }
        }
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(v) = o.max_factorial_n {
            self.caps.max_factorial_n = v;
        }
        if let Some(v) = o.max_sparse_n {
            self.caps.max_sparse_n = v;
        }
        if let Some(v) = o.max_exponent {
            self.caps.max_exponent = v;
        }
        if let Some(v) = o.factor_limit {
            self.caps.factor_limit = v;
        }
        if let Some(v) = o.precision {
            self.precision.start = v;
        }
        if let Some(v) = o.max_precision {
            self.precision.max = v;
        }
        self.show_radius |= o.show_radius;
        if self.precision.max < self.precision.start {
            self.precision.max = self.precision.start;
        }
        self
    }
}
