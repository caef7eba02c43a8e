//! First-order cable filtering.
//!
//! Discretization: matched-z single pole with unity DC gain,
//! `y[t] = a y[t-1] + (1-a) x[t]` with `a = exp(-2 pi f_c / fs)`. This
//! choice is fixed for reproducibility. Under the 20x oversampling rule
//! its magnitude response tracks the analog single pole to well under a
//! percent across the band of interest.

use super::waveform::Waveform;

/// Apply a first-order low-pass with the given crossover frequency.
/// An infinite crossover (degenerate cable channel) passes the signal
/// through unchanged.
pub fn single_pole_lowpass(input: &Waveform, crossover_hz: f64) -> Waveform {
    if !crossover_hz.is_finite() {
        return input.clone();
    }
    let alpha = (-2.0 * std::f64::consts::PI * crossover_hz / input.sample_rate_hz()).exp();
    let gain = 1.0 - alpha;
    let mut output = Vec::with_capacity(input.len());
    let mut state = 0.0;
    for &x in input.samples() {
        state = alpha * state + gain * x;
        output.push(state);
    }
    Waveform::new(output, input.sample_rate_hz()).expect("filtering preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::grid::SimulationGrid;
    use crate::noise::synth::synth_band_limited_gaussian;
    use crate::noise::welch::welch_psd;

    #[test]
    fn dc_gain_is_unity() {
        let w = Waveform::new(vec![1.0; 20_000], 10_000.0).unwrap();
        let filtered = single_pole_lowpass(&w, 100.0);
        let tail = &filtered.samples()[10_000..];
        for &s in tail {
            assert!((s - 1.0).abs() < 1e-6, "settled value {s}");
        }
    }

    #[test]
    fn infinite_crossover_is_identity() {
        let w = Waveform::new(vec![0.5, -0.25, 1.0, 0.0], 100.0).unwrap();
        assert_eq!(single_pole_lowpass(&w, f64::INFINITY), w);
    }

    #[test]
    fn half_power_at_crossover() {
        // White input, pole at 200 Hz, fs = 10 kHz: measured PSD ratio
        // S(f_cr)/S(0) must be 0.5 +- 0.05.
        let grid = SimulationGrid::new(10_000.0, 40.0).unwrap();
        let white = synth_band_limited_gaussian(1.0, 5000.0, &grid, 21).unwrap();
        let filtered = single_pole_lowpass(&white, 200.0);
        let spectrum = welch_psd(&filtered, 4096, 0.5).unwrap();
        let s_low = spectrum.value_at(20.0).unwrap();
        let s_cr = spectrum.value_at(200.0).unwrap();
        let ratio = s_cr / s_low;
        assert!((ratio - 0.5).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn attenuates_out_of_band() {
        let grid = SimulationGrid::new(10_000.0, 20.0).unwrap();
        let white = synth_band_limited_gaussian(1.0, 5000.0, &grid, 22).unwrap();
        let filtered = single_pole_lowpass(&white, 100.0);
        let spectrum = welch_psd(&filtered, 4096, 0.5).unwrap();
        let s_low = spectrum.value_at(10.0).unwrap();
        let s_high = spectrum.value_at(2000.0).unwrap();
        // 2 kHz is 20x the pole: expect ~1/(1+400) attenuation.
        assert!(s_high / s_low < 0.01, "ratio {}", s_high / s_low);
    }
}
