//! Band-limited Gaussian noise synthesis.
//!
//! Generators are synthesized in the frequency domain: independent
//! complex-Gaussian amplitudes on every DFT bin inside `(0, B]`, zero
//! outside, then one inverse FFT. This realizes the ideal hard band edge
//! of the generator model exactly, and the resulting process is strictly
//! Gaussian and stationary with flat one-sided PSD `rms^2 / B` in band.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::grid::SimulationGrid;
use super::waveform::Waveform;
use crate::error::{Error, Result};

/// Synthesize one bit period of generator noise with the given RMS value
/// and hard bandwidth `B`, seeded for exact reproducibility.
pub fn synth_band_limited_gaussian(
    rms: f64,
    bandwidth_b: f64,
    grid: &SimulationGrid,
    seed: u64,
) -> Result<Waveform> {
    if !(rms.is_finite() && rms >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rms must be finite and >= 0, got {rms}"
        )));
    }
    if !(bandwidth_b.is_finite() && bandwidth_b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth_b must be finite and > 0, got {bandwidth_b}"
        )));
    }
    if bandwidth_b > grid.nyquist_hz() {
        return Err(Error::BandwidthExceedsNyquist {
            bandwidth_hz: bandwidth_b,
            nyquist_hz: grid.nyquist_hz(),
        });
    }

    let n = grid.n_samples();
    if rms == 0.0 {
        return Waveform::new(vec![0.0; n], grid.sample_rate_hz);
    }

    let df = grid.sample_rate_hz / n as f64;
    // Bins strictly inside (0, B]; the Nyquist bin is never populated.
    let k_max = ((bandwidth_b / df) * (1.0 + 1e-12)).floor() as usize;
    let k_max = k_max.min(n.div_ceil(2).saturating_sub(1));
    if k_max == 0 {
        return Err(Error::InvalidParameter(format!(
            "bandwidth {bandwidth_b} Hz below the grid resolution {df} Hz; \
             increase the duration"
        )));
    }

    // With X[k] = sigma (a + ib), X[n-k] = conj(X[k]) and the inverse DFT
    // below, the expected sample mean square is 4 k_max sigma^2.
    let sigma = rms / (2.0 * (k_max as f64).sqrt());
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex::new(0.0, 0.0); n];
    for k in 1..=k_max {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let amp = Complex::new(re * sigma, im * sigma);
        spectrum[k] = amp;
        spectrum[n - k] = amp.conj();
    }

    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    let samples: Vec<f64> = spectrum.into_iter().map(|c| c.re).collect();
    Waveform::new(samples, grid.sample_rate_hz)
}
