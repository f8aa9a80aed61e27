//! `key = value` config files merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use super::CliError;

/// Parsed config file. Later duplicates win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "a",
    "b",
    "c",
    "N",
    "l",
    "hbar",
    "mass",
    "out",
    "derive",
    "nmax",
    "n",
    "check",
    "k",
    "rmax",
    "h",
    "richardson",
    "grid_points",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            entries.insert(key.to_string(), value.to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.entries.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(CliError::Usage(format!(
                "config key `{key}`: not a boolean `{v}`"
            ))),
        }
    }
}

/// Command line value if given, else the file value.
pub fn pick<T: std::str::FromStr + Clone>(
    cli: &Option<T>,
    file: &ConfigFile,
    key: &str,
) -> Result<Option<T>, CliError> {
    match cli {
        Some(v) => Ok(Some(v.clone())),
        None => file.get(key),
    }
}
