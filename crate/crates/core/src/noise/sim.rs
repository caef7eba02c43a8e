//! Time-domain simulation of one bit period.
//!
//! The two connected generators are synthesized independently, combined
//! by superposition into the wire voltage and loop current, and each is
//! passed through its own first-order cable filter: the capacitance pole
//! against the parallel resultant for the voltage, the inductance pole
//! against the serial resultant for the current. The two single-pole
//! channels are simulated independently, mirroring the analytic model.

use super::filter::single_pole_lowpass;
use super::grid::SimulationGrid;
use super::synth::synth_band_limited_gaussian;
use super::waveform::Waveform;
use crate::circuit::{BitState, CableModel, GeneratorSet, ResistorQuad};
use crate::error::Result;
use crate::seeds;

/// The observables of one simulated bit period.
#[derive(Debug, Clone, PartialEq)]
pub struct BitWaveforms {
    /// Voltage on the cable capacitance node, volts.
    pub wire_voltage: Waveform,
    /// Current in the cable loop, amperes.
    pub wire_current: Waveform,
    /// Crossover applied to the voltage channel (infinite if none).
    pub f_ucr_hz: f64,
    /// Crossover applied to the current channel (infinite if none).
    pub f_icr_hz: f64,
}

/// Simulate the wire voltage and current of one bit period.
///
/// The generator seeds are derived from `seed`, so a period is fully
/// reproducible from `(inputs, seed)` alone.
pub fn simulate_bit_period(
    state: BitState,
    quad: &ResistorQuad,
    gens: &GeneratorSet,
    cable: &CableModel,
    grid: &SimulationGrid,
    seed: u64,
) -> Result<BitWaveforms> {
    let (r_alice, r_bob) = quad.connected(state);
    let (u_alice, u_bob) = gens.connected(state);
    let r_sum = r_alice + r_bob;
    let r_parallel = r_alice * r_bob / r_sum;

    let c_total = cable.c_total();
    let l_total = cable.l_total();
    let f_ucr = if c_total > 0.0 {
        1.0 / (2.0 * std::f64::consts::PI * r_parallel * c_total)
    } else {
        f64::INFINITY
    };
    let f_icr = if l_total > 0.0 {
        r_sum / (2.0 * std::f64::consts::PI * l_total)
    } else {
        f64::INFINITY
    };
    grid.check_oversampling(&[gens.bandwidth_b, f_ucr, f_icr])?;

    let noise_alice =
        synth_band_limited_gaussian(u_alice, gens.bandwidth_b, grid, seeds::derive(seed, 1))?;
    let noise_bob =
        synth_band_limited_gaussian(u_bob, gens.bandwidth_b, grid, seeds::derive(seed, 2))?;

    let voltage =
        noise_alice.zip_map(&noise_bob, |a, b| (a * r_bob + b * r_alice) / r_sum)?;
    let current = noise_alice.zip_map(&noise_bob, |a, b| (a - b) / r_sum)?;

    Ok(BitWaveforms {
        wire_voltage: single_pole_lowpass(&voltage, f_ucr),
        wire_current: single_pole_lowpass(&current, f_icr),
        f_ucr_hz: f_ucr,
        f_icr_hz: f_icr,
    })
}
