//! Closed-form circuit physics and design algebra: wire levels, generator
//! solutions, fourth-resistor design rules, cable spectra and bit
//! temperatures. Everything here is a pure function of immutable inputs.

mod design;
mod levels;
mod report;
mod spectra;
mod types;
mod vmg;

pub use design::{
    match_parallel_fourth, match_serial_fourth, parallel_matched_quad, serial_matched_quad,
    zero_power_fourth,
};
pub use levels::{
    net_power, parallel_resultant, resultants, serial_resultant, wire_current_ms, wire_levels,
    wire_voltage_ms,
};
pub use report::{full_report, FullReport};
pub use spectra::{
    band_limited_ms, bit_temperatures, crossover_frequencies, lorentzian, spectral_summary,
};
pub use types::{
    BitState, BitTemperatures, CableModel, CrossoverFrequencies, GeneratorSet, ResistorChoice,
    ResistorQuad, Resultants, SpectralSummary, WireLevels, BOLTZMANN, CLASSICAL_REL_TOL,
};
pub use vmg::{
    temperatures, verify_security_conditions, vmg_closed_form, vmg_solve, ResistorTemperatures,
    VMG_VERIFY_REL_TOL,
};
