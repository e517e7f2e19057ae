//! Flat `key = value` configuration text.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored.
//! Keys are consumed by the typed loaders; whatever remains afterwards is
//! reported as an unknown key.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::ConfigError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                content: raw.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line: idx + 1,
                    content: raw.to_string(),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::DuplicateKey {
                    line: idx + 1,
                    key: key.to_string(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Applies a `KEY=VALUE` override, replacing any existing entry.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), ConfigError> {
        let (key, value) = spec
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| ConfigError::BadOverride(spec.to_string()))?;
        self.set(key, value);
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Removes and parses an optional key.
    pub fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(value) => value
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::Unparsable {
                    key: key.to_string(),
                    value,
                }),
        }
    }

    /// Removes and parses a required key.
    pub fn require<T: FromStr>(&mut self, key: &str) -> Result<T, ConfigError> {
        self.take(key)?
            .ok_or_else(|| ConfigError::MissingKey(key.to_string()))
    }

    /// Fails on the first key nobody consumed.
    pub fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_keys().next() {
            Some(key) => Err(ConfigError::UnknownKey(key)),
            None => Ok(()),
        }
    }

    /// Renders the entries back into the text format, sorted by key.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}
