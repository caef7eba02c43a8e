//! Output files: manifest header, hashing, deterministic writers.
//!
//! Every file embeds the config hash and seed. The generation timestamp
//! is isolated: line 1 of a CSV, the first field of a JSON object. Two
//! runs of the same manifest differ only there.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// What produced an output file.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub subcommand: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Manifest {
    pub fn new(subcommand: &str, config_text: &str, seed: u64) -> Self {
        Self {
            tool: format!("kljn {VERSION}"),
            subcommand: subcommand.to_string(),
            config_sha256: sha256_hex(config_text),
            seed,
        }
    }

    pub fn csv_header(&self) -> String {
        format!(
            "# generated_at={}\n# tool={} subcommand={} config_sha256={} seed={}\n",
            timestamp(),
            self.tool,
            self.subcommand,
            self.config_sha256,
            self.seed
        )
    }
}

pub fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        write!(out, "{byte:02x}").expect("hex write");
    }
    out
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Resolve the output directory: flag, then KLJN_OUT_DIR, then ./kljn-out.
pub fn resolve_out_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os("KLJN_OUT_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("kljn-out")),
    }
}

pub fn write_csv(path: &Path, manifest: &Manifest, body: &str) -> Result<(), CliError> {
    let content = format!("{}{}", manifest.csv_header(), body);
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// JSON wrapper: `generated_at` first (its own pretty-printed line),
/// then the manifest, then the payload.
pub fn write_json<T: Serialize>(
    path: &Path,
    manifest: &Manifest,
    data: &T,
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        generated_at: String,
        manifest: &'a Manifest,
        data: &'a T,
    }
    let envelope = Envelope { generated_at: timestamp(), manifest, data };
    let text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| CliError::Message(format!("serialize {}: {e}", path.display())))?;
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Render rows of `(label, value)` as a two-column CSV with a fixed
/// float format (shortest roundtrip, `inf` for infinite).
pub fn label_value_csv(rows: &[(&str, f64)]) -> String {
    let mut out = String::from("label,value\n");
    for (label, value) in rows {
        out.push_str(label);
        out.push(',');
        out.push_str(&format_value(*value));
        out.push('\n');
    }
    out
}

pub fn format_value(value: f64) -> String {
    if value.is_infinite() {
        if value > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{value}")
    }
}
