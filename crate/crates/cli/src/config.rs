//! Flat TOML configuration merged beneath command-line flags.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

use crate::CliError;

/// Reads `path` and returns `--flag=value` arguments for every key whose flag
/// was not given on the command line.
pub fn config_args(path: &Path, sub: &Command, matches: &ArgMatches) -> Result<Vec<OsString>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))?;
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        CliError::Usage(format!("config {}: {}", path.display(), one_line(&e.to_string())))
    })?;

    let mut out = Vec::new();
    for (key, value) in &table {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && key != "config")
            .ok_or_else(|| CliError::Usage(format!("config {}: unknown key '{key}'", path.display())))?;
        if matches.value_source(arg.get_id().as_str()) == Some(ValueSource::CommandLine) {
            continue;
        }
        let is_switch = !arg.get_action().takes_values();
        match (value, is_switch) {
            (toml::Value::Boolean(true), true) => out.push(format!("--{key}").into()),
            (toml::Value::Boolean(false), true) => {}
            (_, true) => return Err(CliError::Usage(format!("config key '{key}' must be true or false"))),
            (v, false) => out.push(format!("--{key}={}", scalar_or_list(key, v)?).into()),
        }
    }
    Ok(out)
}

fn scalar_or_list(key: &str, v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Array(items) => {
            let parts: Result<Vec<_>, _> = items.iter().map(|i| scalar_or_list(key, i)).collect();
            Ok(parts?.join(","))
        }
        _ => Err(CliError::Usage(format!("config key '{key}' has an unsupported value type"))),
    }
}

pub fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
