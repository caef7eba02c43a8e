//! Monte-Carlo attack trial harness.
//!
//! Each trial simulates (or analytically evaluates) one secure bit
//! period with a derived seed, lets Eve measure the wire, and records
//! her verdict. Trials are independent given their seeds, so the batch
//! runs on a work pool and still reproduces bit-for-bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    crossover_attack, default_eval_frequencies, estimate_crossover, leak_estimate,
    temperature_attack, temperature_predictions, AttackVerdict, CrossoverMeasurement, LeakReport,
    TemperatureMeasurement, TrialOutcome,
};
use crate::circuit::{
    spectral_summary, BitState, CableModel, GeneratorSet, ResistorQuad, SpectralSummary,
};
use crate::error::{Error, Result};
use crate::noise::{simulate_bit_period, welch_psd, BitWaveforms, SimulationGrid};
use crate::seeds;

const STATE_STREAM: u64 = 0x57A7E;

/// Which passive attack Eve mounts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    Crossover,
    Temperature,
}

/// Which wire observables Eve measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelSelection {
    Voltage,
    Current,
    Both,
}

impl ChannelSelection {
    pub fn voltage(&self) -> bool {
        matches!(self, ChannelSelection::Voltage | ChannelSelection::Both)
    }
    pub fn current(&self) -> bool {
        matches!(self, ChannelSelection::Current | ChannelSelection::Both)
    }
}

/// Eve's measurement knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveMeasureParams {
    pub welch_segment_len: usize,
    pub welch_overlap: f64,
    pub n_eval_points: usize,
}

impl Default for EveMeasureParams {
    fn default() -> Self {
        Self {
            welch_segment_len: crate::noise::DEFAULT_SEGMENT_LEN,
            welch_overlap: crate::noise::DEFAULT_OVERLAP,
            n_eval_points: 8,
        }
    }
}

/// Estimate the crossover frequencies from simulated waveforms. A
/// channel where the estimator finds no usable spectrum point reports
/// `None` (Eve failed to measure it).
pub fn measure_crossovers(
    sim: &BitWaveforms,
    channels: ChannelSelection,
    predictions: &SpectralSummary,
    bandwidth_b: f64,
    params: &EveMeasureParams,
) -> Result<CrossoverMeasurement> {
    let mut measurement = CrossoverMeasurement::default();
    let run = |waveform: &crate::noise::Waveform, s0: f64| -> Result<Option<f64>> {
        let spectrum = welch_psd(waveform, params.welch_segment_len, params.welch_overlap)?;
        let freqs = default_eval_frequencies(bandwidth_b, &spectrum, params.n_eval_points);
        match estimate_crossover(&spectrum, s0, &freqs) {
            Ok(f) => Ok(Some(f)),
            Err(Error::NoUsablePoints) => Ok(None),
            Err(e) => Err(e),
        }
    };
    if channels.voltage() {
        measurement.f_ucr_est = run(&sim.wire_voltage, predictions.s_u0)?;
    }
    if channels.current() {
        measurement.f_icr_est = run(&sim.wire_current, predictions.s_i0)?;
    }
    Ok(measurement)
}

/// Mean-square measurement from simulated waveforms.
pub fn measure_temperatures(
    sim: &BitWaveforms,
    channels: ChannelSelection,
) -> TemperatureMeasurement {
    TemperatureMeasurement {
        u_c_ms: channels.voltage().then(|| sim.wire_voltage.mean_square()),
        i_l_ms: channels.current().then(|| sim.wire_current.mean_square()),
    }
}

/// Noise-free measurement: the exact crossovers of the true state.
pub fn analytic_crossover_measurement(
    true_state: BitState,
    channels: ChannelSelection,
    predictions: &SpectralSummary,
) -> CrossoverMeasurement {
    let (f_u, f_i) = match true_state {
        BitState::HL => (predictions.f_ucr_hl, predictions.f_icr_hl),
        _ => (predictions.f_ucr_lh, predictions.f_icr_lh),
    };
    CrossoverMeasurement {
        f_ucr_est: channels.voltage().then_some(f_u),
        f_icr_est: channels.current().then_some(f_i),
    }
}

/// Noise-free measurement: the exact band-limited mean squares of the
/// true state.
pub fn analytic_temperature_measurement(
    true_state: BitState,
    channels: ChannelSelection,
    predictions: &SpectralSummary,
    bandwidth_b: f64,
) -> TemperatureMeasurement {
    let (hl, lh) = temperature_predictions(predictions, bandwidth_b);
    let (u, i) = if true_state == BitState::HL { hl } else { lh };
    TemperatureMeasurement {
        u_c_ms: channels.voltage().then_some(u),
        i_l_ms: channels.current().then_some(i),
    }
}

/// Run the configured attack on a measurement. Withheld verdicts
/// (indistinguishable hypotheses, or a crossover measurement Eve failed
/// to extract) map to `None`; real errors propagate.
pub fn decide(
    attack: AttackKind,
    crossover: Option<&CrossoverMeasurement>,
    temperature: Option<&TemperatureMeasurement>,
    predictions: &SpectralSummary,
    bandwidth_b: f64,
) -> Result<Option<AttackVerdict>> {
    let outcome = match attack {
        AttackKind::Crossover => {
            let measurement = crossover.ok_or_else(|| {
                Error::InvalidParameter("crossover attack without measurement".into())
            })?;
            if measurement.f_ucr_est.is_none() && measurement.f_icr_est.is_none() {
                return Ok(None);
            }
            crossover_attack(measurement, predictions)
        }
        AttackKind::Temperature => {
            let measurement = temperature.ok_or_else(|| {
                Error::InvalidParameter("temperature attack without measurement".into())
            })?;
            temperature_attack(measurement, predictions, bandwidth_b)
        }
    };
    match outcome {
        Ok(v) => Ok(Some(v)),
        Err(Error::IndistinguishableHypotheses) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Configuration of one attack batch on a fixed instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTrialConfig {
    pub quad: ResistorQuad,
    pub gens: GeneratorSet,
    pub cable: CableModel,
    pub grid: SimulationGrid,
    pub attack: AttackKind,
    pub channels: ChannelSelection,
    pub n_trials: usize,
    pub master_seed: u64,
    /// Evaluate wire levels analytically instead of sampling noise.
    pub analytic: bool,
    pub measure: EveMeasureParams,
}

/// Full log of one trial, one JSON line in the campaign output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub true_state: BitState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover: Option<CrossoverMeasurement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<TemperatureMeasurement>,
    /// None means the verdict was withheld (indistinguishable); the leak
    /// estimate then substitutes a seeded fair coin.
    pub verdict: Option<AttackVerdict>,
}

impl TrialRecord {
    pub fn outcome(&self) -> TrialOutcome {
        TrialOutcome {
            seed: self.seed,
            true_state: self.true_state,
            verdict: self.verdict,
        }
    }
}

fn draw_secure_state(seed: u64) -> BitState {
    let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(seed, STATE_STREAM));
    if rng.random::<bool>() {
        BitState::HL
    } else {
        BitState::LH
    }
}

fn run_one_trial(
    cfg: &AttackTrialConfig,
    predictions: &SpectralSummary,
    index: usize,
) -> Result<TrialRecord> {
    let seed = seeds::derive(cfg.master_seed, index as u64);
    let true_state = draw_secure_state(seed);
    let bandwidth_b = cfg.gens.bandwidth_b;

    let (crossover, temperature) = if cfg.analytic {
        match cfg.attack {
            AttackKind::Crossover => (
                Some(analytic_crossover_measurement(true_state, cfg.channels, predictions)),
                None,
            ),
            AttackKind::Temperature => (
                None,
                Some(analytic_temperature_measurement(
                    true_state,
                    cfg.channels,
                    predictions,
                    bandwidth_b,
                )),
            ),
        }
    } else {
        let sim = simulate_bit_period(
            true_state,
            &cfg.quad,
            &cfg.gens,
            &cfg.cable,
            &cfg.grid,
            seed,
        )?;
        match cfg.attack {
            AttackKind::Crossover => (
                Some(measure_crossovers(
                    &sim,
                    cfg.channels,
                    predictions,
                    bandwidth_b,
                    &cfg.measure,
                )?),
                None,
            ),
            AttackKind::Temperature => (None, Some(measure_temperatures(&sim, cfg.channels))),
        }
    };

    let verdict = decide(
        cfg.attack,
        crossover.as_ref(),
        temperature.as_ref(),
        predictions,
        bandwidth_b,
    )?;

    Ok(TrialRecord { seed, true_state, crossover, temperature, verdict })
}

/// Run a batch of attack trials and fold them into the leak report.
pub fn run_trials(cfg: &AttackTrialConfig) -> Result<(Vec<TrialRecord>, LeakReport)> {
    if cfg.n_trials == 0 {
        return Err(Error::InvalidParameter("n_trials must be >= 1".into()));
    }
    let predictions = spectral_summary(&cfg.quad, &cfg.gens, &cfg.cable)?;
    let records: Vec<TrialRecord> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|index| run_one_trial(cfg, &predictions, index))
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<TrialOutcome> = records.iter().map(TrialRecord::outcome).collect();
    let report = leak_estimate(&outcomes)?;
    Ok((records, report))
}
