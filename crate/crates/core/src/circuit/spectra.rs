//! Cable-filtered spectra: crossover frequencies, Lorentzian shapes,
//! band-limited mean squares and bit noise-temperatures.
//!
//! The cable capacitance forms a first-order low-pass with the parallel
//! resultant (wire voltage); the cable inductance forms one with the
//! serial resultant (loop current). Both wire spectra are therefore
//! Lorentzian with state-dependent crossover frequencies, which is
//! exactly the observable the passive attacks exploit.

use std::f64::consts::PI;

use super::levels::{resultants, wire_levels};
use super::types::{
    BitTemperatures, CableModel, CrossoverFrequencies, GeneratorSet, ResistorQuad,
    SpectralSummary, WireLevels, BOLTZMANN,
};
use crate::error::{Error, Result};

/// Crossover (pole) frequencies of the wire voltage and current spectra
/// for the two secure states. A zero cable capacitance or inductance
/// yields an infinite crossover on that channel; this is the documented
/// reporting sentinel, not an error.
pub fn crossover_frequencies(quad: &ResistorQuad, cable: &CableModel) -> CrossoverFrequencies {
    let r = resultants(quad);
    let c_total = cable.c_total();
    let l_total = cable.l_total();
    let f_ucr = |r_p: f64| {
        if c_total > 0.0 {
            1.0 / (2.0 * PI * r_p * c_total)
        } else {
            f64::INFINITY
        }
    };
    let f_icr = |r_s: f64| {
        if l_total > 0.0 {
            r_s / (2.0 * PI * l_total)
        } else {
            f64::INFINITY
        }
    };
    CrossoverFrequencies {
        f_ucr_hl: f_ucr(r.r_p_hl),
        f_ucr_lh: f_ucr(r.r_p_lh),
        f_icr_hl: f_icr(r.r_s_hl),
        f_icr_lh: f_icr(r.r_s_lh),
    }
}

/// Lorentzian spectral density `s0 / (1 + f^2 / f_cr^2)`.
pub fn lorentzian(s0: f64, f_cr: f64, f: f64) -> f64 {
    let ratio = f / f_cr;
    s0 / (1.0 + ratio * ratio)
}

/// Mean square of a Lorentzian spectrum integrated over `[0, b]`:
/// `s0 * f_cr * atan(b / f_cr)`.
///
/// As `b -> inf` this tends to `(pi/2) * s0 * f_cr`; as `b -> 0` it
/// approaches the white value `s0 * b`, which is the reason bandwidth
/// reduction suppresses the leak. An infinite `f_cr` (no cable filtering)
/// returns the white value exactly.
pub fn band_limited_ms(s0: f64, f_cr: f64, b: f64) -> f64 {
    if !f_cr.is_finite() {
        return s0 * b;
    }
    s0 * f_cr * (b / f_cr).atan()
}

/// Bit noise-temperatures of the wire seen as a thermal source, from the
/// white wire levels: voltage temperatures against the parallel
/// resultants, current temperatures against the serial resultants.
pub fn bit_temperatures(levels: &WireLevels, quad: &ResistorQuad, b: f64) -> BitTemperatures {
    let r = resultants(quad);
    let four_kb = 4.0 * BOLTZMANN * b;
    BitTemperatures {
        t_u_hl: levels.u_hl_ms() / (four_kb * r.r_p_hl),
        t_u_lh: levels.u_lh_ms() / (four_kb * r.r_p_lh),
        t_i_hl: levels.i_hl_ms() * r.r_s_hl / four_kb,
        t_i_lh: levels.i_lh_ms() * r.r_s_lh / four_kb,
    }
}

/// Everything a passive observer can predict from public parameters:
/// zero-frequency PSDs, crossover frequencies and bit temperatures.
///
/// The zero-frequency PSDs assume the generator set satisfies the
/// security conditions (the HL and LH values coincide); the HL values
/// are used.
pub fn spectral_summary(
    quad: &ResistorQuad,
    gens: &GeneratorSet,
    cable: &CableModel,
) -> Result<SpectralSummary> {
    let levels = wire_levels(quad, gens);
    let crossovers = crossover_frequencies(quad, cable);
    let temps = bit_temperatures(&levels, quad, gens.bandwidth_b);
    if levels.u_hl_ms() <= 0.0 || levels.i_hl_ms() <= 0.0 {
        return Err(Error::InvalidParameter(
            "spectral summary needs nonzero wire levels".into(),
        ));
    }
    Ok(SpectralSummary {
        s_u0: levels.u_hl_ms() / gens.bandwidth_b,
        s_i0: levels.i_hl_ms() / gens.bandwidth_b,
        f_ucr_hl: crossovers.f_ucr_hl,
        f_ucr_lh: crossovers.f_ucr_lh,
        f_icr_hl: crossovers.f_icr_hl,
        f_icr_lh: crossovers.f_icr_lh,
        t_u_hl: temps.t_u_hl,
        t_u_lh: temps.t_u_lh,
        t_i_hl: temps.t_i_hl,
        t_i_lh: temps.t_i_lh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::vmg::vmg_solve;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_4;

    fn quad(r_ha: f64, r_lb: f64, r_la: f64, r_hb: f64) -> ResistorQuad {
        ResistorQuad::new(r_ha, r_lb, r_la, r_hb).unwrap()
    }

    fn cap_cable() -> CableModel {
        CableModel::new(2000.0, 100e-12, 0.0).unwrap()
    }

    fn ind_cable() -> CableModel {
        CableModel::new(2000.0, 0.0, 0.7e-6).unwrap()
    }

    #[test]
    fn voltage_crossovers_match_reference() {
        let f = crossover_frequencies(&quad(9000.0, 1000.0, 1000.0, 9000.0), &cap_cable());
        assert_relative_eq!(f.f_ucr_hl, 884.0, max_relative = 5e-3);
        assert_relative_eq!(f.f_ucr_lh, 884.0, max_relative = 5e-3);
        assert!(f.f_icr_hl.is_infinite());

        let f = crossover_frequencies(&quad(10_000.0, 5000.0, 1000.0, 9000.0), &cap_cable());
        assert_relative_eq!(f.f_ucr_hl, 239.0, max_relative = 5e-3);
        assert_relative_eq!(f.f_ucr_lh, 884.0, max_relative = 5e-3);
    }

    #[test]
    fn current_crossovers_match_reference() {
        let f = crossover_frequencies(&quad(10_000.0, 5000.0, 1000.0, 9000.0), &ind_cable());
        assert_relative_eq!(f.f_icr_hl, 1.71e6, max_relative = 5e-3);
        assert_relative_eq!(f.f_icr_lh, 1.14e6, max_relative = 5e-3);
        assert!(f.f_ucr_hl.is_infinite());
    }

    #[test]
    fn lorentzian_shape() {
        assert_relative_eq!(lorentzian(2.5, 50.0, 0.0), 2.5, max_relative = 1e-15);
        assert_relative_eq!(lorentzian(2.5, 50.0, 50.0), 1.25, max_relative = 1e-15);
        assert_relative_eq!(lorentzian(1.0, 50.0, 100.0), 0.2, max_relative = 1e-12);
    }

    #[test]
    fn band_limited_ms_limits() {
        // b = f_cr gives atan(1) = pi/4.
        assert_relative_eq!(
            band_limited_ms(2.0, 100.0, 100.0),
            2.0 * 100.0 * FRAC_PI_4,
            max_relative = 1e-12
        );
        assert_eq!(band_limited_ms(2.0, 100.0, 0.0), 0.0);
        // Infinite bandwidth limit: kT/C for a single resistor R at
        // temperature T feeding capacitance C. s0 = 4kTR, f_cr = 1/(2 pi R C).
        let (r, t, c) = (5000.0, 300.0, 1e-9);
        let s0 = 4.0 * BOLTZMANN * t * r;
        let f_cr = 1.0 / (2.0 * PI * r * c);
        let infinite_b = s0 * f_cr * PI / 2.0;
        assert_relative_eq!(infinite_b, BOLTZMANN * t / c, max_relative = 1e-12);
        // atan saturates: by b = 1e6 f_cr we are within 1e-6 of the limit.
        assert_relative_eq!(
            band_limited_ms(s0, f_cr, 1e6 * f_cr),
            infinite_b,
            max_relative = 1e-5
        );
        // Degenerate cable (infinite crossover) returns the white value.
        assert_relative_eq!(
            band_limited_ms(1e-3, f64::INFINITY, 1000.0),
            1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bit_temperatures_match_reference() {
        let b = 1000.0;
        // Classical: all four 1.81e16 K.
        let q = quad(9000.0, 1000.0, 1000.0, 9000.0);
        let gens = vmg_solve(&q, 1.0, b).unwrap();
        let t = bit_temperatures(&wire_levels(&q, &gens), &q, b);
        for value in [t.t_u_hl, t.t_u_lh, t.t_i_hl, t.t_i_lh] {
            assert_relative_eq!(value, 1.81e16, max_relative = 1e-2);
        }

        let q = quad(10_000.0, 5000.0, 1000.0, 9000.0);
        let gens = vmg_solve(&q, 1.0, b).unwrap();
        let t = bit_temperatures(&wire_levels(&q, &gens), &q, b);
        assert_relative_eq!(t.t_u_hl, 4.48e15, max_relative = 1e-2);
        assert_relative_eq!(t.t_u_lh, 1.66e16, max_relative = 1e-2);
        assert_relative_eq!(t.t_i_hl, 6.54e15, max_relative = 1e-2);
        assert_relative_eq!(t.t_i_lh, 4.36e15, max_relative = 1e-2);
    }

    #[test]
    fn summary_collects_consistent_fields() {
        let q = quad(10_000.0, 5000.0, 1000.0, 9000.0);
        let gens = vmg_solve(&q, 1.0, 1000.0).unwrap();
        let cable = CableModel::new(2000.0, 100e-12, 0.7e-6).unwrap();
        let summary = spectral_summary(&q, &gens, &cable).unwrap();
        let levels = wire_levels(&q, &gens);
        assert_relative_eq!(summary.s_u0 * 1000.0, levels.u_hl_ms(), max_relative = 1e-12);
        assert_relative_eq!(summary.s_i0 * 1000.0, levels.i_hl_ms(), max_relative = 1e-12);
        assert!(summary.f_ucr_hl < summary.f_ucr_lh);
        assert!(summary.f_icr_hl > summary.f_icr_lh);
    }
}
