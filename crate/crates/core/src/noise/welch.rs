//! Welch-averaged one-sided power spectral density estimation.
//!
//! Hann-windowed overlapped segments, power-normalized so that the
//! integral of the PSD over frequency reproduces the waveform mean
//! square for stationary inputs.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::waveform::Waveform;
use crate::error::{Error, Result};

/// Default Welch segment length in samples.
pub const DEFAULT_SEGMENT_LEN: usize = 4096;
/// Default overlap fraction between consecutive segments.
pub const DEFAULT_OVERLAP: f64 = 0.5;

/// One-sided PSD estimate on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    /// Ascending bin frequencies, hertz.
    pub frequencies: Vec<f64>,
    /// PSD values, V^2/Hz or A^2/Hz.
    pub psd: Vec<f64>,
    /// Noise-equivalent resolution bandwidth of the window, hertz.
    pub resolution_bw_hz: f64,
}

impl SpectrumEstimate {
    /// Linearly interpolated PSD at `f`; None outside the support.
    pub fn value_at(&self, f: f64) -> Option<f64> {
        let first = *self.frequencies.first()?;
        let last = *self.frequencies.last()?;
        if !(first..=last).contains(&f) {
            return None;
        }
        let idx = self.frequencies.partition_point(|&x| x < f);
        if idx == 0 {
            return Some(self.psd[0]);
        }
        let (f0, f1) = (self.frequencies[idx - 1], self.frequencies[idx.min(self.psd.len() - 1)]);
        if f0 == f1 {
            return Some(self.psd[idx - 1]);
        }
        let t = (f - f0) / (f1 - f0);
        Some(self.psd[idx - 1] * (1.0 - t) + self.psd[idx] * t)
    }

    /// Rectangle-rule integral of the PSD over its support; equals the
    /// input mean square within estimation error for stationary inputs.
    pub fn total_power(&self) -> f64 {
        if self.frequencies.len() < 2 {
            return 0.0;
        }
        let df = self.frequencies[1] - self.frequencies[0];
        self.psd.iter().sum::<f64>() * df
    }

    pub fn max_frequency(&self) -> f64 {
        self.frequencies.last().copied().unwrap_or(0.0)
    }
}

/// Welch PSD of a waveform with Hann window.
pub fn welch_psd(
    waveform: &Waveform,
    segment_len: usize,
    overlap_fraction: f64,
) -> Result<SpectrumEstimate> {
    if segment_len < 2 {
        return Err(Error::InvalidParameter(format!(
            "segment_len must be >= 2, got {segment_len}"
        )));
    }
    if segment_len > waveform.len() {
        return Err(Error::SegmentTooLong {
            segment_len,
            waveform_len: waveform.len(),
        });
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::InvalidParameter(format!(
            "overlap_fraction must be in [0, 1), got {overlap_fraction}"
        )));
    }

    let fs = waveform.sample_rate_hz();
    let hop = ((segment_len as f64) * (1.0 - overlap_fraction)).round().max(1.0) as usize;

    // Periodic Hann window.
    let window: Vec<f64> = (0..segment_len)
        .map(|m| {
            let phase = 2.0 * std::f64::consts::PI * m as f64 / segment_len as f64;
            0.5 * (1.0 - phase.cos())
        })
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let window_sum: f64 = window.iter().sum();

    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let n_bins = segment_len / 2 + 1;
    let mut accumulated = vec![0.0_f64; n_bins];
    let mut n_segments = 0usize;
    let samples = waveform.samples();
    let mut buffer = vec![Complex::new(0.0, 0.0); segment_len];
    let mut start = 0;
    while start + segment_len <= samples.len() {
        for (slot, (s, w)) in buffer
            .iter_mut()
            .zip(samples[start..start + segment_len].iter().zip(&window))
        {
            *slot = Complex::new(s * w, 0.0);
        }
        fft.process(&mut buffer);
        for (k, acc) in accumulated.iter_mut().enumerate() {
            *acc += buffer[k].norm_sqr();
        }
        n_segments += 1;
        start += hop;
    }

    let scale = 1.0 / (fs * window_power * n_segments as f64);
    let psd: Vec<f64> = accumulated
        .iter()
        .enumerate()
        .map(|(k, acc)| {
            // One-sided: double the interior bins, not DC or Nyquist.
            let one_sided = if k == 0 || (segment_len % 2 == 0 && k == segment_len / 2) {
                1.0
            } else {
                2.0
            };
            acc * scale * one_sided
        })
        .collect();
    let frequencies: Vec<f64> = (0..n_bins).map(|k| k as f64 * fs / segment_len as f64).collect();
    let resolution_bw_hz = fs * window_power / (window_sum * window_sum);

    Ok(SpectrumEstimate { frequencies, psd, resolution_bw_hz })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::grid::SimulationGrid;
    use crate::noise::synth::synth_band_limited_gaussian;

    #[test]
    fn white_band_plateau_level() {
        // rms 1 V over B = 1 kHz: plateau 1e-3 V^2/Hz within 5%.
        let grid = SimulationGrid::new(20_000.0, 30.0).unwrap();
        let w = synth_band_limited_gaussian(1.0, 1000.0, &grid, 5).unwrap();
        let spectrum = welch_psd(&w, 4096, 0.5).unwrap();
        for f in [200.0, 400.0, 600.0, 800.0] {
            let s = spectrum.value_at(f).unwrap();
            assert!((s - 1e-3).abs() < 5e-5, "PSD at {f} Hz: {s}");
        }
        // Above the band edge the PSD collapses.
        let s_out = spectrum.value_at(2000.0).unwrap();
        assert!(s_out < 1e-6, "out-of-band PSD {s_out}");
    }

    #[test]
    fn sinusoid_power_via_parseval() {
        // Amplitude A sine: integrated PSD = A^2/2 within 2%.
        let fs = 8192.0;
        let n = 65_536;
        let amp = 3.0;
        let f0 = 440.0;
        let samples: Vec<f64> = (0..n)
            .map(|i| amp * (2.0 * std::f64::consts::PI * f0 * i as f64 / fs).sin())
            .collect();
        let w = Waveform::new(samples, fs).unwrap();
        let spectrum = welch_psd(&w, 4096, 0.5).unwrap();
        let total = spectrum.total_power();
        let expected = amp * amp / 2.0;
        assert!(
            (total - expected).abs() / expected < 0.02,
            "total {total} vs {expected}"
        );
    }

    #[test]
    fn parseval_on_stationary_noise() {
        // >= 100 segments: integral matches mean square within 2%.
        let grid = SimulationGrid::new(10_000.0, 60.0).unwrap();
        let w = synth_band_limited_gaussian(1.5, 2000.0, &grid, 17).unwrap();
        let spectrum = welch_psd(&w, 4096, 0.5).unwrap();
        let total = spectrum.total_power();
        let ms = w.mean_square();
        assert!(
            (total - ms).abs() / ms < 0.02,
            "integral {total} vs mean square {ms}"
        );
    }

    #[test]
    fn segment_too_long_rejected() {
        let w = Waveform::new(vec![0.0; 100], 1000.0).unwrap();
        let err = welch_psd(&w, 128, 0.5).unwrap_err();
        assert!(matches!(err, Error::SegmentTooLong { .. }));
    }

    #[test]
    fn interpolation_inside_support_only() {
        let w = Waveform::new(vec![1.0, 0.0, -1.0, 0.0].repeat(64), 1000.0).unwrap();
        let spectrum = welch_psd(&w, 64, 0.0).unwrap();
        assert!(spectrum.value_at(-1.0).is_none());
        assert!(spectrum.value_at(1e9).is_none());
        assert!(spectrum.value_at(250.0).is_some());
    }
}
