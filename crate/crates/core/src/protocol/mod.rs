//! Key-exchange session state machine.
//!
//! Each bit period both parties flip a fair private coin, connect the
//! chosen resistor, and classify the wire voltage level against the
//! analytic level table to learn the peer's choice. Mixed states (HL,
//! LH) yield key bits under the agreed convention; HH and LL periods
//! are discarded. An optional eavesdropper hook records the passive
//! attack verdict for every secure period.
//!
//! Two evaluation modes: `Analytic` decodes from exact levels (protocol
//! logic only, no statistics), `MonteCarlo` samples the full noise
//! simulation. Per-period seeds derive from the master seed, so sessions
//! reproduce bit-for-bit regardless of execution order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attacks::{
    analytic_crossover_measurement, analytic_temperature_measurement, decide, leak_estimate,
    measure_crossovers, measure_temperatures, AttackKind, AttackVerdict, ChannelSelection,
    EveMeasureParams, LeakReport, TrialOutcome,
};
use crate::circuit::{
    band_limited_ms, parallel_resultant, spectral_summary, vmg_solve, wire_voltage_ms, BitState,
    CableModel, GeneratorSet, ResistorChoice, ResistorQuad, SpectralSummary,
};
use crate::error::{Error, Result};
use crate::noise::{simulate_bit_period, SimulationGrid};
use crate::seeds;

/// Which secure state encodes the key bit 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitConvention {
    HlIsOne,
    LhIsOne,
}

impl BitConvention {
    /// Key bit for a state; None for discarded states.
    pub fn bit_for(&self, state: BitState) -> Option<bool> {
        match state {
            BitState::HL => Some(matches!(self, BitConvention::HlIsOne)),
            BitState::LH => Some(matches!(self, BitConvention::LhIsOne)),
            _ => None,
        }
    }
}

/// Exact-level evaluation or sampled-noise simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionMode {
    Analytic,
    MonteCarlo,
}

/// Eavesdropper hook configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveConfig {
    pub attack: AttackKind,
    pub channels: ChannelSelection,
    #[serde(default)]
    pub measure: EveMeasureParams,
}

/// Complete session configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub quad: ResistorQuad,
    /// Freely chosen low-A generator RMS; the rest are solved unless
    /// `generators` overrides them.
    pub u_la: f64,
    pub bandwidth_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorSet>,
    pub cable: CableModel,
    pub grid: SimulationGrid,
    pub n_bit_periods: usize,
    pub master_seed: u64,
    pub bit_convention: BitConvention,
    pub mode: SessionMode,
    /// Diagnostics: force every period into one state instead of random
    /// coin flips.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_state: Option<BitState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eve: Option<EveConfig>,
}

/// Analytic wire-voltage levels per state, corrected for the cable pole
/// over the generator band: these are the values a long measurement
/// converges to, so decoding compares against them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateLevels {
    pub u_ms_hh: f64,
    pub u_ms_hl: f64,
    pub u_ms_lh: f64,
    pub u_ms_ll: f64,
}

impl StateLevels {
    pub fn level(&self, state: BitState) -> f64 {
        match state {
            BitState::HH => self.u_ms_hh,
            BitState::HL => self.u_ms_hl,
            BitState::LH => self.u_ms_lh,
            BitState::LL => self.u_ms_ll,
        }
    }
}

/// Band-limited analytic levels for all four states.
pub fn state_levels(
    quad: &ResistorQuad,
    gens: &GeneratorSet,
    cable: &CableModel,
) -> StateLevels {
    let c_total = cable.c_total();
    let level = |state: BitState| {
        let white_ms = wire_voltage_ms(quad, gens, state);
        if c_total > 0.0 {
            let f_ucr =
                1.0 / (2.0 * std::f64::consts::PI * parallel_resultant(quad, state) * c_total);
            band_limited_ms(white_ms / gens.bandwidth_b, f_ucr, gens.bandwidth_b)
        } else {
            white_ms
        }
    };
    StateLevels {
        u_ms_hh: level(BitState::HH),
        u_ms_hl: level(BitState::HL),
        u_ms_lh: level(BitState::LH),
        u_ms_ll: level(BitState::LL),
    }
}

/// A party in the exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
}

/// The two states consistent with a party's own choice, keyed by the
/// implied peer choice: `(peer_low_state, peer_high_state)`.
fn candidate_states(party: Party, own: ResistorChoice) -> (BitState, BitState) {
    match (party, own) {
        (Party::Alice, ResistorChoice::High) => (BitState::HL, BitState::HH),
        (Party::Alice, ResistorChoice::Low) => (BitState::LL, BitState::LH),
        (Party::Bob, ResistorChoice::High) => (BitState::LH, BitState::HH),
        (Party::Bob, ResistorChoice::Low) => (BitState::LL, BitState::HL),
    }
}

/// Classify the measured mean-square wire voltage against the two levels
/// consistent with the party's own choice; returns the implied peer
/// resistor choice.
pub fn decode_state(
    party: Party,
    own: ResistorChoice,
    measured_u_ms: f64,
    levels: &StateLevels,
) -> ResistorChoice {
    let (low_state, high_state) = candidate_states(party, own);
    let d_low = (measured_u_ms - levels.level(low_state)).abs();
    let d_high = (measured_u_ms - levels.level(high_state)).abs();
    if d_low < d_high {
        ResistorChoice::Low
    } else {
        ResistorChoice::High
    }
}

/// Guard against undecodable configurations: every decision pair must be
/// separated by more than three standard errors of the per-period
/// mean-square estimate.
fn check_level_separation(levels: &StateLevels, bandwidth_b: f64, duration_s: f64) -> Result<()> {
    // Relative standard error of a mean square averaged over B*T
    // effective samples.
    let bt = bandwidth_b * duration_s;
    let se = |ms: f64| ms / bt.sqrt();
    for party in [Party::Alice, Party::Bob] {
        for own in [ResistorChoice::Low, ResistorChoice::High] {
            let (s_low, s_high) = candidate_states(party, own);
            let (l_low, l_high) = (levels.level(s_low), levels.level(s_high));
            let separation = (l_low - l_high).abs();
            let std_error = se(l_low).max(se(l_high));
            if separation <= 3.0 * std_error {
                return Err(Error::AmbiguousLevels { separation, std_error });
            }
        }
    }
    Ok(())
}

/// Ground truth and decoded views of one bit period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub index: usize,
    pub seed: u64,
    pub true_state: BitState,
    pub measured_u_ms: f64,
    /// Peer choice as decoded by Alice.
    pub alice_peer: ResistorChoice,
    /// Peer choice as decoded by Bob.
    pub bob_peer: ResistorChoice,
    /// Ground-truth security of the period.
    pub secure: bool,
    /// Eve's verdict for secure periods when the hook is enabled; the
    /// inner Option is None when her verdict was withheld.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_verdict: Option<Option<AttackVerdict>>,
}

/// Result of a full session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRecord {
    pub master_seed: u64,
    pub n_bit_periods: usize,
    pub periods: Vec<PeriodRecord>,
    /// Key bits as decoded by each party, and the ground truth.
    pub alice_key: Vec<bool>,
    pub bob_key: Vec<bool>,
    pub true_key: Vec<bool>,
    pub alice_key_hex: String,
    pub bob_key_hex: String,
    pub discard_count: usize,
    /// Periods where a party's decoded state disagrees with the truth.
    pub decode_errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eve_leak: Option<LeakReport>,
}

pub fn key_hex(bits: &[bool]) -> String {
    bits.chunks(8)
        .map(|chunk| {
            let mut byte = 0u8;
            for (i, &bit) in chunk.iter().enumerate() {
                if bit {
                    byte |= 1 << (7 - i);
                }
            }
            format!("{byte:02x}")
        })
        .collect()
}

const ALICE_COIN: u64 = 0xA11CE;
const BOB_COIN: u64 = 0xB0B;

fn draw_choice(seed: u64, stream: u64) -> ResistorChoice {
    let mut rng = ChaCha12Rng::seed_from_u64(seeds::derive(seed, stream));
    if rng.random::<bool>() {
        ResistorChoice::High
    } else {
        ResistorChoice::Low
    }
}

struct PeriodEvaluation {
    record: PeriodRecord,
}

fn run_period(
    cfg: &SessionConfig,
    gens: &GeneratorSet,
    levels: &StateLevels,
    predictions: &SpectralSummary,
    index: usize,
) -> Result<PeriodEvaluation> {
    let seed = seeds::derive(cfg.master_seed, index as u64);
    let (alice_choice, bob_choice) = match cfg.forced_state {
        Some(state) => (state.alice(), state.bob()),
        None => (draw_choice(seed, ALICE_COIN), draw_choice(seed, BOB_COIN)),
    };
    let true_state = BitState::from_choices(alice_choice, bob_choice);

    let (measured_u_ms, sim) = match cfg.mode {
        SessionMode::Analytic => (levels.level(true_state), None),
        SessionMode::MonteCarlo => {
            let sim = simulate_bit_period(
                true_state,
                &cfg.quad,
                gens,
                &cfg.cable,
                &cfg.grid,
                seed,
            )?;
            (sim.wire_voltage.mean_square(), Some(sim))
        }
    };

    let alice_peer = decode_state(Party::Alice, alice_choice, measured_u_ms, levels);
    let bob_peer = decode_state(Party::Bob, bob_choice, measured_u_ms, levels);

    let eve_verdict = match (&cfg.eve, true_state.is_secure()) {
        (Some(eve), true) => {
            let (crossover, temperature) = match cfg.mode {
                SessionMode::Analytic => match eve.attack {
                    AttackKind::Crossover => (
                        Some(analytic_crossover_measurement(
                            true_state,
                            eve.channels,
                            predictions,
                        )),
                        None,
                    ),
                    AttackKind::Temperature => (
                        None,
                        Some(analytic_temperature_measurement(
                            true_state,
                            eve.channels,
                            predictions,
                            cfg.bandwidth_b,
                        )),
                    ),
                },
                SessionMode::MonteCarlo => {
                    let sim = sim.as_ref().expect("simulated period");
                    match eve.attack {
                        AttackKind::Crossover => (
                            Some(measure_crossovers(
                                sim,
                                eve.channels,
                                predictions,
                                cfg.bandwidth_b,
                                &eve.measure,
                            )?),
                            None,
                        ),
                        AttackKind::Temperature => {
                            (None, Some(measure_temperatures(sim, eve.channels)))
                        }
                    }
                }
            };
            Some(decide(
                eve.attack,
                crossover.as_ref(),
                temperature.as_ref(),
                predictions,
                cfg.bandwidth_b,
            )?)
        }
        _ => None,
    };

    Ok(PeriodEvaluation {
        record: PeriodRecord {
            index,
            seed,
            true_state,
            measured_u_ms,
            alice_peer,
            bob_peer,
            secure: true_state.is_secure(),
            eve_verdict,
        },
    })
}

/// Run a full session.
pub fn run_session(cfg: &SessionConfig) -> Result<SessionRecord> {
    if cfg.n_bit_periods == 0 {
        return Err(Error::InvalidParameter("n_bit_periods must be >= 1".into()));
    }
    let gens = match cfg.generators {
        Some(g) => g,
        None => vmg_solve(&cfg.quad, cfg.u_la, cfg.bandwidth_b)?,
    };
    let levels = state_levels(&cfg.quad, &gens, &cfg.cable);
    if cfg.mode == SessionMode::MonteCarlo {
        check_level_separation(&levels, cfg.bandwidth_b, cfg.grid.duration_s)?;
    }
    let predictions = spectral_summary(&cfg.quad, &gens, &cfg.cable)?;

    let evaluations: Vec<PeriodEvaluation> = (0..cfg.n_bit_periods)
        .into_par_iter()
        .map(|index| run_period(cfg, &gens, &levels, &predictions, index))
        .collect::<Result<Vec<_>>>()?;

    let mut periods = Vec::with_capacity(evaluations.len());
    let mut alice_key = Vec::new();
    let mut bob_key = Vec::new();
    let mut true_key = Vec::new();
    let mut discard_count = 0;
    let mut decode_errors = 0;
    let mut eve_outcomes = Vec::new();

    for evaluation in evaluations {
        let record = evaluation.record;
        let alice_choice = record.true_state.alice();
        let bob_choice = record.true_state.bob();

        let alice_view = BitState::from_choices(alice_choice, record.alice_peer);
        let bob_view = BitState::from_choices(record.bob_peer, bob_choice);
        if alice_view != record.true_state || bob_view != record.true_state {
            decode_errors += 1;
        }
        if let Some(bit) = cfg.bit_convention.bit_for(alice_view) {
            alice_key.push(bit);
        }
        if let Some(bit) = cfg.bit_convention.bit_for(bob_view) {
            bob_key.push(bit);
        }
        match cfg.bit_convention.bit_for(record.true_state) {
            Some(bit) => true_key.push(bit),
            None => discard_count += 1,
        }
        if let Some(verdict) = record.eve_verdict {
            eve_outcomes.push(TrialOutcome {
                seed: record.seed,
                true_state: record.true_state,
                verdict,
            });
        }
        periods.push(record);
    }

    let eve_leak = if eve_outcomes.is_empty() {
        None
    } else {
        Some(leak_estimate(&eve_outcomes)?)
    };

    Ok(SessionRecord {
        master_seed: cfg.master_seed,
        n_bit_periods: cfg.n_bit_periods,
        alice_key_hex: key_hex(&alice_key),
        bob_key_hex: key_hex(&bob_key),
        periods,
        alice_key,
        bob_key,
        true_key,
        discard_count,
        decode_errors,
        eve_leak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical_config(mode: SessionMode, n: usize) -> SessionConfig {
        SessionConfig {
            quad: ResistorQuad::new(9000.0, 1000.0, 1000.0, 9000.0).unwrap(),
            u_la: 1.0,
            bandwidth_b: 1000.0,
            generators: None,
            cable: CableModel::ideal(2000.0).unwrap(),
            grid: SimulationGrid::new(20_000.0, 0.2).unwrap(),
            n_bit_periods: n,
            master_seed: 2024,
            bit_convention: BitConvention::HlIsOne,
            mode,
            forced_state: None,
            eve: None,
        }
    }

    #[test]
    fn analytic_session_agrees_and_discards_binomially() {
        let cfg = classical_config(SessionMode::Analytic, 1000);
        let record = run_session(&cfg).unwrap();
        assert_eq!(record.decode_errors, 0);
        assert_eq!(record.alice_key, record.bob_key);
        assert_eq!(record.alice_key, record.true_key);
        // 3-sigma binomial band around 500.
        assert!(
            (440..=560).contains(&record.discard_count),
            "discards {}",
            record.discard_count
        );
        assert_eq!(record.alice_key.len() + record.discard_count, 1000);
    }

    #[test]
    fn forced_state_single_period() {
        let mut cfg = classical_config(SessionMode::Analytic, 1);
        cfg.forced_state = Some(BitState::HL);
        let record = run_session(&cfg).unwrap();
        assert_eq!(record.alice_key, vec![true]);
        assert_eq!(record.bob_key, vec![true]);
        assert_eq!(record.discard_count, 0);
        // Opposite convention flips the bit.
        cfg.bit_convention = BitConvention::LhIsOne;
        let record = run_session(&cfg).unwrap();
        assert_eq!(record.alice_key, vec![false]);
    }

    #[test]
    fn decode_distinguishes_all_levels() {
        let quad = ResistorQuad::new(9000.0, 1000.0, 1000.0, 9000.0).unwrap();
        let gens = vmg_solve(&quad, 1.0, 1000.0).unwrap();
        let cable = CableModel::ideal(2000.0).unwrap();
        let levels = state_levels(&quad, &gens, &cable);
        // Alice low, exact secure level: peer is high.
        let peer = decode_state(Party::Alice, ResistorChoice::Low, levels.u_ms_lh, &levels);
        assert_eq!(peer, ResistorChoice::High);
        // Alice low, exact LL level: peer low (discard).
        let peer = decode_state(Party::Alice, ResistorChoice::Low, levels.u_ms_ll, &levels);
        assert_eq!(peer, ResistorChoice::Low);
        // Bob high, exact HH level: peer high.
        let peer = decode_state(Party::Bob, ResistorChoice::High, levels.u_ms_hh, &levels);
        assert_eq!(peer, ResistorChoice::High);
    }

    #[test]
    fn monte_carlo_decode_error_rate_small() {
        // 500 periods of 0.2 s at B = 1 kHz: error rate below 1%.
        let cfg = classical_config(SessionMode::MonteCarlo, 500);
        let record = run_session(&cfg).unwrap();
        let error_rate = record.decode_errors as f64 / 500.0;
        assert!(error_rate < 0.01, "decode error rate {error_rate}");
    }

    #[test]
    fn ambiguous_levels_guard_trips_on_short_periods() {
        let mut cfg = classical_config(SessionMode::MonteCarlo, 10);
        cfg.grid = SimulationGrid::new(20_000.0, 0.002).unwrap();
        let err = run_session(&cfg).unwrap_err();
        assert!(matches!(err, Error::AmbiguousLevels { .. }), "got {err:?}");
    }

    #[test]
    fn session_reproducible_bit_for_bit() {
        let cfg = classical_config(SessionMode::MonteCarlo, 20);
        let a = run_session(&cfg).unwrap();
        let b = run_session(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_power_quad_session_keeps_zero_power() {
        let quad = ResistorQuad::new(9000.0, 1000.0, 500.0, 18_000.0).unwrap();
        let gens = vmg_solve(&quad, 1.0, 1000.0).unwrap();
        let levels = crate::circuit::wire_levels(&quad, &gens);
        let scale = 1.0 / crate::circuit::resultants(&quad).r_s_lh;
        assert!(levels.p_hl.abs() < 1e-9 * scale);
        assert!(levels.p_lh.abs() < 1e-9 * scale);
        // Session over this quad decodes cleanly in analytic mode.
        let mut cfg = classical_config(SessionMode::Analytic, 64);
        cfg.quad = quad;
        let record = run_session(&cfg).unwrap();
        assert_eq!(record.decode_errors, 0);
        assert_eq!(record.alice_key, record.bob_key);
    }

    #[test]
    fn key_hex_packs_msb_first() {
        assert_eq!(key_hex(&[true, false, true, false, false, false, false, true]), "a1");
        assert_eq!(key_hex(&[true]), "80");
        assert_eq!(key_hex(&[]), "");
    }

    #[test]
    fn eve_hook_records_secure_periods_only() {
        let mut cfg = classical_config(SessionMode::Analytic, 100);
        cfg.cable = CableModel::new(2000.0, 100e-12, 0.0).unwrap();
        cfg.eve = Some(EveConfig {
            attack: AttackKind::Crossover,
            channels: ChannelSelection::Voltage,
            measure: EveMeasureParams::default(),
        });
        let record = run_session(&cfg).unwrap();
        let n_secure = record.periods.iter().filter(|p| p.secure).count();
        let n_attacked = record.periods.iter().filter(|p| p.eve_verdict.is_some()).count();
        assert_eq!(n_secure, n_attacked);
        // Classical quad: all verdicts withheld, leak near half.
        assert!(record.periods.iter().all(|p| p.eve_verdict.flatten().is_none()));
        let leak = record.eve_leak.unwrap();
        assert!(leak.p > 0.3 && leak.p < 0.7, "leak {}", leak.p);
    }
}
