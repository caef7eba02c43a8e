//! Passive single-point attacks and leak statistics.
//!
//! Eve knows the resistor quad, generator set, cable and bandwidth
//! (worst case for the defenders). From a one-point wire measurement she
//! estimates either the spectrum crossover frequency or the band-limited
//! mean squares, compares them against the analytic predictions for the
//! two secure states, and guesses the bit. Her long-run correct-guess
//! probability, with a Wilson confidence interval, is the operational
//! leak measure; 0.5 means no leak.

mod campaign;

pub use campaign::{
    analytic_crossover_measurement, analytic_temperature_measurement, decide, measure_crossovers,
    measure_temperatures, run_trials, AttackKind, AttackTrialConfig, ChannelSelection,
    EveMeasureParams, TrialRecord,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{band_limited_ms, BitState, SpectralSummary};
use crate::error::{Error, Result};
use crate::noise::SpectrumEstimate;
use crate::seeds;

/// Two prediction values closer than this (relative) count as identical,
/// i.e. non-discriminating.
pub const PREDICTION_DISTINCT_REL_TOL: f64 = 1e-9;

/// Seed stream index used for the fair coin that replaces a withheld
/// verdict in the leak statistics.
const COIN_STREAM: u64 = 0xC01;

/// Eve's decision for one bit period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackVerdict {
    /// Guessed secure state (always HL or LH).
    pub guessed_state: BitState,
    /// Signed decision statistic; positive favors HL.
    pub statistic_value: f64,
    /// Absolute value of the statistic: how decisively the evidence
    /// separated the hypotheses.
    pub decision_margin: f64,
}

impl AttackVerdict {
    fn from_statistic(statistic: f64) -> Self {
        let guessed_state = if statistic >= 0.0 { BitState::HL } else { BitState::LH };
        AttackVerdict {
            guessed_state,
            statistic_value: statistic,
            decision_margin: statistic.abs(),
        }
    }
}

/// Crossover-frequency estimates per channel; `None` means the channel
/// was not measured.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CrossoverMeasurement {
    pub f_ucr_est: Option<f64>,
    pub f_icr_est: Option<f64>,
}

/// Band-limited mean-square measurements per channel.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TemperatureMeasurement {
    /// Measured mean-square wire voltage, V^2.
    pub u_c_ms: Option<f64>,
    /// Measured mean-square wire current, A^2.
    pub i_l_ms: Option<f64>,
}

/// Correct-guess statistics over a batch of attack trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakReport {
    pub n_trials: usize,
    pub n_correct: usize,
    /// Correct-guess probability estimate.
    pub p: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

impl LeakReport {
    /// True when the 95% interval excludes a fair coin, i.e. the
    /// configuration leaks.
    pub fn leaks(&self) -> bool {
        self.wilson_lo > 0.5 || self.wilson_hi < 0.5
    }

    pub fn contains_half(&self) -> bool {
        (self.wilson_lo..=self.wilson_hi).contains(&0.5)
    }
}

/// Invert the Lorentzian at every usable evaluation frequency and return
/// the sensitivity-weighted mean crossover estimate.
///
/// A point is usable when the interpolated PSD exists, is positive and
/// sits strictly below the zero-frequency level `s0`. Points are
/// weighted by `f^2 S^2(f)`, the sensitivity of the spectrum to the
/// crossover at that frequency.
pub fn estimate_crossover(
    spectrum: &SpectrumEstimate,
    s0: f64,
    eval_freqs: &[f64],
) -> Result<f64> {
    if !(s0.is_finite() && s0 > 0.0) {
        return Err(Error::InvalidParameter(format!("s0 must be > 0, got {s0}")));
    }
    let mut weighted_sum = 0.0;
    let mut weight_total = 0.0;
    for &f in eval_freqs {
        if !(f.is_finite() && f > 0.0) {
            continue;
        }
        let Some(s) = spectrum.value_at(f) else { continue };
        if s <= 0.0 || s >= s0 {
            continue;
        }
        let f_cr = f / (s0 / s - 1.0).sqrt();
        let weight = f * f * s * s;
        weighted_sum += weight * f_cr;
        weight_total += weight;
    }
    if weight_total == 0.0 {
        return Err(Error::NoUsablePoints);
    }
    Ok(weighted_sum / weight_total)
}

/// Default evaluation frequencies: `n_points` log-spaced points spanning
/// `[B/8, B]`, clipped to the spectrum support.
pub fn default_eval_frequencies(
    bandwidth_b: f64,
    spectrum: &SpectrumEstimate,
    n_points: usize,
) -> Vec<f64> {
    let first = spectrum.frequencies.iter().copied().find(|&f| f > 0.0).unwrap_or(0.0);
    let lo = (bandwidth_b / 8.0).max(first);
    let hi = bandwidth_b.min(spectrum.max_frequency());
    if !(lo > 0.0) || hi <= lo || n_points == 0 {
        return Vec::new();
    }
    let log_lo = lo.ln();
    let log_hi = hi.ln();
    (0..n_points)
        .map(|i| {
            let t = if n_points == 1 { 0.0 } else { i as f64 / (n_points - 1) as f64 };
            (log_lo + t * (log_hi - log_lo)).exp()
        })
        .collect()
}

fn distinct(a: f64, b: f64) -> bool {
    if a.is_infinite() && b.is_infinite() {
        return false;
    }
    if a.is_infinite() || b.is_infinite() {
        return true;
    }
    (a - b).abs() > PREDICTION_DISTINCT_REL_TOL * a.abs().max(b.abs())
}

/// Decide the bit from crossover estimates: per usable channel pick the
/// hypothesis whose predicted crossover is nearer in log-frequency, then
/// keep the channel with the larger decision margin.
///
/// A channel is usable when a measurement exists and the two predictions
/// differ. Requesting a channel whose predicted crossovers are infinite
/// (no cable parasitic) is a degenerate-cable error; if every measured
/// channel has identical predictions the verdict is withheld as
/// indistinguishable.
pub fn crossover_attack(
    measured: &CrossoverMeasurement,
    predictions: &SpectralSummary,
) -> Result<AttackVerdict> {
    let mut best: Option<AttackVerdict> = None;
    let channels = [
        ("voltage", measured.f_ucr_est, predictions.f_ucr_hl, predictions.f_ucr_lh),
        ("current", measured.f_icr_est, predictions.f_icr_hl, predictions.f_icr_lh),
    ];
    if channels.iter().all(|(_, est, _, _)| est.is_none()) {
        return Err(Error::InvalidParameter(
            "crossover attack needs at least one measured channel".into(),
        ));
    }
    for (name, estimate, pred_hl, pred_lh) in channels {
        let Some(estimate) = estimate else { continue };
        if pred_hl.is_infinite() && pred_lh.is_infinite() {
            return Err(Error::DegenerateCable(format!(
                "{name} channel has no finite crossover to attack"
            )));
        }
        if !distinct(pred_hl, pred_lh) {
            continue;
        }
        if !(estimate.is_finite() && estimate > 0.0) {
            continue;
        }
        let d_hl = (estimate.ln() - pred_hl.ln()).abs();
        let d_lh = (estimate.ln() - pred_lh.ln()).abs();
        let verdict = AttackVerdict::from_statistic(d_lh - d_hl);
        if best.map_or(true, |b| verdict.decision_margin > b.decision_margin) {
            best = Some(verdict);
        }
    }
    best.ok_or(Error::IndistinguishableHypotheses)
}

/// Analytic band-limited mean-square predictions per hypothesis, as
/// `((u_hl, i_hl), (u_lh, i_lh))`.
pub fn temperature_predictions(
    predictions: &SpectralSummary,
    bandwidth_b: f64,
) -> ((f64, f64), (f64, f64)) {
    let u_hl = band_limited_ms(predictions.s_u0, predictions.f_ucr_hl, bandwidth_b);
    let u_lh = band_limited_ms(predictions.s_u0, predictions.f_ucr_lh, bandwidth_b);
    let i_hl = band_limited_ms(predictions.s_i0, predictions.f_icr_hl, bandwidth_b);
    let i_lh = band_limited_ms(predictions.s_i0, predictions.f_icr_lh, bandwidth_b);
    ((u_hl, i_hl), (u_lh, i_lh))
}

/// Decide the bit from measured mean squares: pick the hypothesis
/// minimizing the combined squared relative distance over the measured
/// channels. Withheld when the predicted pairs are identical.
pub fn temperature_attack(
    measured: &TemperatureMeasurement,
    predictions: &SpectralSummary,
    bandwidth_b: f64,
) -> Result<AttackVerdict> {
    if measured.u_c_ms.is_none() && measured.i_l_ms.is_none() {
        return Err(Error::InvalidParameter(
            "temperature attack needs at least one measured channel".into(),
        ));
    }
    let ((u_hl, i_hl), (u_lh, i_lh)) = temperature_predictions(predictions, bandwidth_b);

    let mut d_hl = 0.0;
    let mut d_lh = 0.0;
    let mut discriminating = false;
    let mut accumulate = |meas: Option<f64>, pred_hl: f64, pred_lh: f64| {
        let Some(meas) = meas else { return };
        if distinct(pred_hl, pred_lh) {
            discriminating = true;
        }
        let rel_hl = (meas - pred_hl) / pred_hl;
        let rel_lh = (meas - pred_lh) / pred_lh;
        d_hl += rel_hl * rel_hl;
        d_lh += rel_lh * rel_lh;
    };
    accumulate(measured.u_c_ms, u_hl, u_lh);
    accumulate(measured.i_l_ms, i_hl, i_lh);

    if !discriminating {
        return Err(Error::IndistinguishableHypotheses);
    }
    Ok(AttackVerdict::from_statistic(d_lh - d_hl))
}

/// One attack trial: ground truth and Eve's verdict (or a withheld one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub true_state: BitState,
    pub verdict: Option<AttackVerdict>,
}

/// Wilson 95% score interval for a binomial proportion.
pub fn wilson_95(n_correct: usize, n_trials: usize) -> (f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let n = n_trials as f64;
    let p = n_correct as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Aggregate trials into the leak estimate. A withheld verdict counts as
/// a fair coin flip seeded from the trial's own seed, so classical
/// (immune) configurations converge to p = 0.5 and the report stays
/// reproducible.
pub fn leak_estimate(trials: &[TrialOutcome]) -> Result<LeakReport> {
    if trials.is_empty() {
        return Err(Error::InvalidParameter("leak estimate needs at least one trial".into()));
    }
    let mut n_correct = 0usize;
    for trial in trials {
        let guess = match trial.verdict {
            Some(v) => v.guessed_state,
            None => {
                let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(trial.seed, COIN_STREAM));
                if rng.random::<bool>() {
                    BitState::HL
                } else {
                    BitState::LH
                }
            }
        };
        if guess == trial.true_state {
            n_correct += 1;
        }
    }
    let (wilson_lo, wilson_hi) = wilson_95(n_correct, trials.len());
    Ok(LeakReport {
        n_trials: trials.len(),
        n_correct,
        p: n_correct as f64 / trials.len() as f64,
        wilson_lo,
        wilson_hi,
    })
}
