//! Config file loading with command-line overrides.
//!
//! `--set a.b.c=value` edits the parsed TOML document before it is
//! deserialized, so every config key is overridable without a dedicated
//! flag. The canonical text used for hashing is the re-serialized,
//! fully resolved configuration, so the hash reflects overrides.

use kljn_core::config::RunConfig;
use toml::Value;

use crate::{CliError, ConfigArgs};

/// Load, override and validate a run configuration. Returns the config
/// and its canonical text (for hashing).
pub fn load(args: &ConfigArgs) -> Result<(RunConfig, String), CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut value: Value = toml::from_str(&text)
        .map_err(|e| CliError::Message(format!("{}: {e}", args.config.display())))?;
    for entry in &args.overrides {
        apply_override(&mut value, entry)?;
    }
    let resolved = toml::to_string_pretty(&value)
        .map_err(|e| CliError::Message(format!("re-serialize config: {e}")))?;
    let config = RunConfig::from_toml(&resolved)?;
    let canonical = config.to_toml();
    Ok((config, canonical))
}

fn apply_override(root: &mut Value, entry: &str) -> Result<(), CliError> {
    let (path, raw) = entry.split_once('=').ok_or_else(|| {
        CliError::Message(format!("--set expects KEY=VALUE, got `{entry}`"))
    })?;
    let parsed = parse_scalar(raw);
    let mut node = root;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() || segments.iter().any(|s| s.is_empty()) {
        return Err(CliError::Message(format!("bad --set path `{path}`")));
    }
    for segment in &segments[..segments.len() - 1] {
        node = node
            .as_table_mut()
            .ok_or_else(|| CliError::Message(format!("--set path `{path}` crosses a non-table")))?
            .entry(segment.to_string())
            .or_insert(Value::Table(Default::default()));
    }
    let table = node
        .as_table_mut()
        .ok_or_else(|| CliError::Message(format!("--set path `{path}` crosses a non-table")))?;
    table.insert(segments[segments.len() - 1].to_string(), parsed);
    Ok(())
}

/// Interpret the raw value as TOML scalar, falling back to a string.
fn parse_scalar(raw: &str) -> Value {
    let candidate = format!("v = {raw}");
    if let Ok(Value::Table(mut t)) = toml::from_str::<Value>(&candidate) {
        if let Some(v) = t.remove("v") {
            return v;
        }
    }
    Value::String(raw.to_string())
}
