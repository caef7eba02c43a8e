use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly sampled real signal (volts or amperes).
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "waveform needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample_rate_hz must be finite and > 0, got {sample_rate_hz}"
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter("waveform contains non-finite samples".into()));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Arithmetic mean of the squared samples.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    /// Combine two waveforms sample by sample.
    pub fn zip_map(&self, other: &Waveform, f: impl Fn(f64, f64) -> f64) -> Result<Waveform> {
        if self.len() != other.len() || self.sample_rate_hz != other.sample_rate_hz {
            return Err(Error::InvalidParameter(
                "zip_map needs waveforms on the same grid".into(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Waveform::new(samples, self.sample_rate_hz)
    }
}

/// Metadata sidecar written next to a binary waveform dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformSidecar {
    pub sample_rate_hz: f64,
    /// Physical units of the samples, e.g. "V" or "A".
    pub units: String,
    pub seed: u64,
    pub n_samples: usize,
}

/// Dump samples as little-endian f64 to `<path>` and the sidecar as JSON
/// to `<path>.json`.
pub fn dump_waveform(w: &Waveform, path: &Path, units: &str, seed: u64) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    let mut bytes = Vec::with_capacity(w.len() * 8);
    for s in w.samples() {
        bytes.extend_from_slice(&s.to_le_bytes());
    }
    file.write_all(&bytes)?;
    let sidecar = WaveformSidecar {
        sample_rate_hz: w.sample_rate_hz(),
        units: units.to_string(),
        seed,
        n_samples: w.len(),
    };
    let sidecar_path = path.with_extension(format!(
        "{}json",
        path.extension().map(|e| format!("{}.", e.to_string_lossy())).unwrap_or_default()
    ));
    std::fs::write(sidecar_path, serde_json::to_string_pretty(&sidecar)?)?;
    Ok(())
}

/// Read a waveform dumped by [`dump_waveform`].
pub fn load_waveform(path: &Path) -> std::io::Result<(Waveform, WaveformSidecar)> {
    let sidecar_path = path.with_extension(format!(
        "{}json",
        path.extension().map(|e| format!("{}.", e.to_string_lossy())).unwrap_or_default()
    ));
    let sidecar: WaveformSidecar =
        serde_json::from_str(&std::fs::read_to_string(sidecar_path)?)?;
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let samples: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let waveform = Waveform::new(samples, sidecar.sample_rate_hz)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))?;
    Ok((waveform, sidecar))
}
