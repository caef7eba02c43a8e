//! Resultant resistances and white-noise wire levels.
//!
//! The wire voltage is the superposition of the two connected generators
//! through the resistive divider they form; the loop current is their
//! difference over the serial resultant. Generators are independent, so
//! mean squares add.

use super::types::{BitState, GeneratorSet, Resultants, ResistorQuad, WireLevels};

fn parallel(a: f64, b: f64) -> f64 {
    a * b / (a + b)
}

/// Parallel and serial resultant resistances for the two secure states.
pub fn resultants(quad: &ResistorQuad) -> Resultants {
    Resultants {
        r_p_hl: parallel(quad.r_ha, quad.r_lb),
        r_p_lh: parallel(quad.r_la, quad.r_hb),
        r_s_hl: quad.r_ha + quad.r_lb,
        r_s_lh: quad.r_la + quad.r_hb,
    }
}

/// Parallel resultant of the connected resistances in an arbitrary state.
pub fn parallel_resultant(quad: &ResistorQuad, state: BitState) -> f64 {
    let (ra, rb) = quad.connected(state);
    parallel(ra, rb)
}

/// Serial resultant of the connected resistances in an arbitrary state.
pub fn serial_resultant(quad: &ResistorQuad, state: BitState) -> f64 {
    let (ra, rb) = quad.connected(state);
    ra + rb
}

/// Mean-square wire voltage for an arbitrary state (white-noise level,
/// no cable filtering), volts squared.
pub fn wire_voltage_ms(quad: &ResistorQuad, gens: &GeneratorSet, state: BitState) -> f64 {
    let (ra, rb) = quad.connected(state);
    let (ua, ub) = gens.connected(state);
    let sum = ra + rb;
    (ua * ua * rb * rb + ub * ub * ra * ra) / (sum * sum)
}

/// Mean-square loop current for an arbitrary state, amperes squared.
pub fn wire_current_ms(quad: &ResistorQuad, gens: &GeneratorSet, state: BitState) -> f64 {
    let (ra, rb) = quad.connected(state);
    let (ua, ub) = gens.connected(state);
    let sum = ra + rb;
    (ua * ua + ub * ub) / (sum * sum)
}

/// Net power flow from Alice to Bob for an arbitrary state, watts.
///
/// Positive means Alice heats Bob. By superposition this is the power
/// Alice's generator dissipates in Bob's resistor minus the power Bob's
/// generator dissipates in Alice's.
pub fn net_power(quad: &ResistorQuad, gens: &GeneratorSet, state: BitState) -> f64 {
    let (ra, rb) = quad.connected(state);
    let (ua, ub) = gens.connected(state);
    let sum = ra + rb;
    (rb * ua * ua - ra * ub * ub) / (sum * sum)
}

/// RMS wire levels and powers of the two secure states.
pub fn wire_levels(quad: &ResistorQuad, gens: &GeneratorSet) -> WireLevels {
    WireLevels {
        u_hl: wire_voltage_ms(quad, gens, BitState::HL).sqrt(),
        u_lh: wire_voltage_ms(quad, gens, BitState::LH).sqrt(),
        i_hl: wire_current_ms(quad, gens, BitState::HL).sqrt(),
        i_lh: wire_current_ms(quad, gens, BitState::LH).sqrt(),
        p_hl: net_power(quad, gens, BitState::HL),
        p_lh: net_power(quad, gens, BitState::LH),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::vmg::vmg_solve;
    use approx::assert_relative_eq;

    #[test]
    fn resultants_classical_pair() {
        let quad = ResistorQuad::new(9000.0, 1000.0, 1000.0, 9000.0).unwrap();
        let r = resultants(&quad);
        assert_relative_eq!(r.r_p_hl, 900.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_p_lh, 900.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_hl, 10_000.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_lh, 10_000.0, max_relative = 1e-12);
    }

    #[test]
    fn resultants_generalized_quad() {
        let quad = ResistorQuad::new(10_000.0, 5000.0, 1000.0, 9000.0).unwrap();
        let r = resultants(&quad);
        assert_relative_eq!(r.r_p_hl, 10_000.0 * 5000.0 / 15_000.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_p_lh, 900.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_hl, 15_000.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_lh, 10_000.0, max_relative = 1e-12);
    }

    #[test]
    fn resultants_equal_resistors() {
        let quad = ResistorQuad::new(470.0, 470.0, 470.0, 470.0).unwrap();
        let r = resultants(&quad);
        assert_relative_eq!(r.r_p_hl, 235.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_p_lh, 235.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_hl, 940.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_lh, 940.0, max_relative = 1e-12);
    }

    #[test]
    fn classical_levels_match_reference() {
        // Classical instance: U_HL = U_LH = 0.948 V, I = 3.16e-4 A, P = 0.
        let quad = ResistorQuad::new(9000.0, 1000.0, 1000.0, 9000.0).unwrap();
        let gens = vmg_solve(&quad, 1.0, 1000.0).unwrap();
        let levels = wire_levels(&quad, &gens);
        assert_relative_eq!(levels.u_hl, 0.948, max_relative = 1e-2);
        assert_relative_eq!(levels.u_lh, levels.u_hl, max_relative = 1e-12);
        assert_relative_eq!(levels.i_hl, 3.16e-4, max_relative = 1e-2);
        assert!(levels.p_hl.abs() < 1e-12 / 10_000.0);
        assert!(levels.p_lh.abs() < 1e-12 / 10_000.0);
    }

    #[test]
    fn zero_generators_zero_levels() {
        let quad = ResistorQuad::new(9000.0, 1000.0, 1000.0, 9000.0).unwrap();
        let gens = GeneratorSet::new(0.0, 0.0, 0.0, 0.0, 1000.0).unwrap();
        let levels = wire_levels(&quad, &gens);
        assert_eq!(levels.u_hl, 0.0);
        assert_eq!(levels.u_lh, 0.0);
        assert_eq!(levels.i_hl, 0.0);
        assert_eq!(levels.i_lh, 0.0);
        assert_eq!(levels.p_hl, 0.0);
        assert_eq!(levels.p_lh, 0.0);
    }

    #[test]
    fn serial_matched_power_matches_reference() {
        // Serial-matched design: P_HL = P_LH = -0.00606 W.
        let quad = ResistorQuad::new(100.0, 10.0, 50.0, 60.0).unwrap();
        let gens = vmg_solve(&quad, 1.0, 1000.0).unwrap();
        let levels = wire_levels(&quad, &gens);
        assert_relative_eq!(levels.p_hl, -0.00606, max_relative = 1e-2);
        assert_relative_eq!(levels.p_lh, -0.00606, max_relative = 1e-2);
        assert_relative_eq!(levels.p_hl, levels.p_lh, max_relative = 1e-9);
    }
}
