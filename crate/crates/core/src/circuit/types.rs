use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boltzmann constant in J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Relative tolerance for classifying a quad as classical (identical
/// resistor pairs at Alice and Bob).
pub const CLASSICAL_REL_TOL: f64 = 1e-12;

fn require_positive(value: f64, name: &str) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and > 0, got {value}"
        )));
    }
    Ok(())
}

fn require_non_negative(value: f64, name: &str) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and >= 0, got {value}"
        )));
    }
    Ok(())
}

fn rel_eq(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

/// The four resistances of a key-exchange instance, in ohms.
///
/// Alice owns `r_ha` / `r_la`, Bob owns `r_hb` / `r_lb`. During each bit
/// period one resistor per side is connected to the wire. All values are
/// strictly positive; the classical scheme is the special case of two
/// identical pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResistorQuad {
    pub r_ha: f64,
    pub r_lb: f64,
    pub r_la: f64,
    pub r_hb: f64,
}

impl ResistorQuad {
    pub fn new(r_ha: f64, r_lb: f64, r_la: f64, r_hb: f64) -> Result<Self> {
        require_positive(r_ha, "r_ha")?;
        require_positive(r_lb, "r_lb")?;
        require_positive(r_la, "r_la")?;
        require_positive(r_hb, "r_hb")?;
        Ok(Self { r_ha, r_lb, r_la, r_hb })
    }

    /// True iff the two parties hold identical resistor pairs
    /// (`r_la = r_lb` and `r_ha = r_hb` within 1e-12 relative).
    pub fn is_classical(&self) -> bool {
        rel_eq(self.r_la, self.r_lb, CLASSICAL_REL_TOL)
            && rel_eq(self.r_ha, self.r_hb, CLASSICAL_REL_TOL)
    }

    /// The resistances connected to the wire in a given bit state, as
    /// `(alice_side, bob_side)`.
    pub fn connected(&self, state: BitState) -> (f64, f64) {
        let alice = match state.alice() {
            ResistorChoice::High => self.r_ha,
            ResistorChoice::Low => self.r_la,
        };
        let bob = match state.bob() {
            ResistorChoice::High => self.r_hb,
            ResistorChoice::Low => self.r_lb,
        };
        (alice, bob)
    }

    /// Mirror the instance: Alice and Bob exchange roles (HL and LH swap).
    pub fn swapped(&self) -> Self {
        Self {
            r_ha: self.r_hb,
            r_lb: self.r_la,
            r_la: self.r_lb,
            r_hb: self.r_ha,
        }
    }
}

/// RMS voltages of the four noise generators plus their shared bandwidth.
///
/// Each generator emulates the Johnson noise of its resistor at some
/// effective temperature; `u_xy` pairs with resistor `r_xy`. The mapping
/// to temperature is `T = U^2 / (4 k R B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub u_ha: f64,
    pub u_lb: f64,
    pub u_la: f64,
    pub u_hb: f64,
    /// Shared noise bandwidth B in hertz.
    pub bandwidth_b: f64,
}

impl GeneratorSet {
    pub fn new(u_ha: f64, u_lb: f64, u_la: f64, u_hb: f64, bandwidth_b: f64) -> Result<Self> {
        require_non_negative(u_ha, "u_ha")?;
        require_non_negative(u_lb, "u_lb")?;
        require_non_negative(u_la, "u_la")?;
        require_non_negative(u_hb, "u_hb")?;
        require_positive(bandwidth_b, "bandwidth_b")?;
        Ok(Self { u_ha, u_lb, u_la, u_hb, bandwidth_b })
    }

    /// RMS generator voltages connected in a given bit state, as
    /// `(alice_side, bob_side)`.
    pub fn connected(&self, state: BitState) -> (f64, f64) {
        let alice = match state.alice() {
            ResistorChoice::High => self.u_ha,
            ResistorChoice::Low => self.u_la,
        };
        let bob = match state.bob() {
            ResistorChoice::High => self.u_hb,
            ResistorChoice::Low => self.u_lb,
        };
        (alice, bob)
    }

    /// Mirror of [`ResistorQuad::swapped`] for the generator voltages.
    pub fn swapped(&self) -> Self {
        Self {
            u_ha: self.u_hb,
            u_lb: self.u_la,
            u_la: self.u_lb,
            u_hb: self.u_ha,
            bandwidth_b: self.bandwidth_b,
        }
    }
}

/// Cable parasitics: length and per-meter capacitance / inductance.
///
/// The lumped values `c_total` and `l_total` form first-order low-pass
/// filters with the parallel (voltage) and serial (current) resultant
/// resistances respectively.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CableModel {
    pub length_m: f64,
    pub cap_per_m: f64,
    pub ind_per_m: f64,
}

impl CableModel {
    pub fn new(length_m: f64, cap_per_m: f64, ind_per_m: f64) -> Result<Self> {
        require_positive(length_m, "length_m")?;
        require_non_negative(cap_per_m, "cap_per_m")?;
        require_non_negative(ind_per_m, "ind_per_m")?;
        Ok(Self { length_m, cap_per_m, ind_per_m })
    }

    /// A cable with no parasitics: both crossover frequencies infinite.
    pub fn ideal(length_m: f64) -> Result<Self> {
        Self::new(length_m, 0.0, 0.0)
    }

    /// Lumped cable capacitance in farads.
    pub fn c_total(&self) -> f64 {
        self.length_m * self.cap_per_m
    }

    /// Lumped cable inductance in henries.
    pub fn l_total(&self) -> f64 {
        self.length_m * self.ind_per_m
    }
}

/// Which resistor a party connected during a bit period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResistorChoice {
    Low,
    High,
}

/// The pair of connected resistors in one bit period, written
/// Alice-then-Bob: `HL` means Alice high, Bob low. `HL` and `LH` are the
/// secure states; `HH` and `LL` are announced by the wire levels and get
/// discarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitState {
    HH,
    HL,
    LH,
    LL,
}

impl BitState {
    pub const ALL: [BitState; 4] = [BitState::HH, BitState::HL, BitState::LH, BitState::LL];
    pub const SECURE: [BitState; 2] = [BitState::HL, BitState::LH];

    pub fn from_choices(alice: ResistorChoice, bob: ResistorChoice) -> Self {
        match (alice, bob) {
            (ResistorChoice::High, ResistorChoice::High) => BitState::HH,
            (ResistorChoice::High, ResistorChoice::Low) => BitState::HL,
            (ResistorChoice::Low, ResistorChoice::High) => BitState::LH,
            (ResistorChoice::Low, ResistorChoice::Low) => BitState::LL,
        }
    }

    pub fn alice(&self) -> ResistorChoice {
        match self {
            BitState::HH | BitState::HL => ResistorChoice::High,
            BitState::LH | BitState::LL => ResistorChoice::Low,
        }
    }

    pub fn bob(&self) -> ResistorChoice {
        match self {
            BitState::HH | BitState::LH => ResistorChoice::High,
            BitState::HL | BitState::LL => ResistorChoice::Low,
        }
    }

    pub fn is_secure(&self) -> bool {
        matches!(self, BitState::HL | BitState::LH)
    }

    /// The other secure state (only meaningful for secure states).
    pub fn secure_opposite(&self) -> Option<BitState> {
        match self {
            BitState::HL => Some(BitState::LH),
            BitState::LH => Some(BitState::HL),
            _ => None,
        }
    }
}

impl std::fmt::Display for BitState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BitState::HH => "HH",
            BitState::HL => "HL",
            BitState::LH => "LH",
            BitState::LL => "LL",
        };
        f.write_str(s)
    }
}

/// Parallel and serial resultant resistances of the two secure states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resultants {
    pub r_p_hl: f64,
    pub r_p_lh: f64,
    pub r_s_hl: f64,
    pub r_s_lh: f64,
}

/// RMS wire voltage and current plus net Alice-to-Bob power for the two
/// secure states (white-noise levels, no cable filtering).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireLevels {
    /// RMS wire voltage in the HL state, volts.
    pub u_hl: f64,
    /// RMS wire voltage in the LH state, volts.
    pub u_lh: f64,
    /// RMS loop current in the HL state, amperes.
    pub i_hl: f64,
    /// RMS loop current in the LH state, amperes.
    pub i_lh: f64,
    /// Net power flow Alice to Bob in the HL state, watts.
    pub p_hl: f64,
    /// Net power flow Alice to Bob in the LH state, watts.
    pub p_lh: f64,
}

impl WireLevels {
    pub fn u_hl_ms(&self) -> f64 {
        self.u_hl * self.u_hl
    }
    pub fn u_lh_ms(&self) -> f64 {
        self.u_lh * self.u_lh
    }
    pub fn i_hl_ms(&self) -> f64 {
        self.i_hl * self.i_hl
    }
    pub fn i_lh_ms(&self) -> f64 {
        self.i_lh * self.i_lh
    }
}

/// Per-state crossover frequencies of the cable-filtered wire spectra.
/// Infinite entries mean the corresponding cable parasitic is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverFrequencies {
    pub f_ucr_hl: f64,
    pub f_ucr_lh: f64,
    pub f_icr_hl: f64,
    pub f_icr_lh: f64,
}

/// Per-state bit noise-temperatures of the wire as a noise source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitTemperatures {
    pub t_u_hl: f64,
    pub t_u_lh: f64,
    pub t_i_hl: f64,
    pub t_i_lh: f64,
}

/// Everything the eavesdropper can predict about the wire spectra:
/// zero-frequency PSDs (identical across secure states by construction),
/// crossover frequencies and bit temperatures per state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    /// Zero-frequency voltage PSD, V^2/Hz.
    pub s_u0: f64,
    /// Zero-frequency current PSD, A^2/Hz.
    pub s_i0: f64,
    pub f_ucr_hl: f64,
    pub f_ucr_lh: f64,
    pub f_icr_hl: f64,
    pub f_icr_lh: f64,
    pub t_u_hl: f64,
    pub t_u_lh: f64,
    pub t_i_hl: f64,
    pub t_i_lh: f64,
}
