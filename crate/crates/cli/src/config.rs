//! Parameter lookup: command-line flag, then config file entry, then default.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Entries of a TOML config file. Arrays are read as comma-separated lists.
#[derive(Debug, Default)]
pub struct Config {
    table: toml::Table,
}

fn scalar(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Config {
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table =
            text.parse().map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if let Some(key) = table.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Usage(format!(
                "unknown config key `{key}` (expected one of: {})",
                allowed.join(", ")
            )));
        }
        Ok(Self { table })
    }

    fn raw(&self, key: &str) -> Option<String> {
        self.table.get(key).map(|v| match v {
            toml::Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(","),
            other => scalar(other),
        })
    }

    pub fn get<T>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s.parse().map(Some).map_err(|e| CliError::Usage(format!("config entry `{key} = {s}`: {e}"))),
        }
    }

    pub fn or<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    pub fn required<T>(&self, flag: Option<T>, key: &str) -> CliResult<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(flag, key)?.ok_or_else(|| CliError::Usage(format!("missing parameter `{key}` (flag or config entry)")))
    }
}

/// Comma-separated list, e.g. `5,10,20`.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T> FromStr for List<T>
where
    T: FromStr,
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", x.trim())))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}
