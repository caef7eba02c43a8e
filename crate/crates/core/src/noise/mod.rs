//! Time-domain noise synthesis, cable filtering and spectral measurement.

mod filter;
mod grid;
mod sim;
mod synth;
mod waveform;
mod welch;

pub use filter::single_pole_lowpass;
pub use grid::{SimulationGrid, MIN_OVERSAMPLING};
pub use sim::{simulate_bit_period, BitWaveforms};
pub use synth::synth_band_limited_gaussian;
pub use waveform::{dump_waveform, load_waveform, Waveform, WaveformSidecar};
pub use welch::{welch_psd, SpectrumEstimate, DEFAULT_OVERLAP, DEFAULT_SEGMENT_LEN};
