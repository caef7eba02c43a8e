//! Fourth-resistor design rules.
//!
//! Three resistors are chosen freely; the fourth is pinned by one of
//! three conditions: zero net power flow, equal parallel resultants
//! (kills the voltage-side leak), or equal serial resultants (kills the
//! current-side leak). Parallel and serial matching are mutually
//! exclusive unless the instance collapses to the classical scheme.

use super::types::ResistorQuad;
use crate::error::{Error, Result};

fn require_positive(value: f64, name: &str) -> Result<f64> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be finite and > 0, got {value}"
        )));
    }
    Ok(value)
}

/// Fourth resistor for zero net power flow: the geometric means of the
/// connected pairs must be equal, so `r_lb = r_hb * r_la / r_ha`.
pub fn zero_power_fourth(r_hb: f64, r_la: f64, r_ha: f64) -> Result<f64> {
    require_positive(r_hb, "r_hb")?;
    require_positive(r_la, "r_la")?;
    require_positive(r_ha, "r_ha")?;
    Ok(r_hb * r_la / r_ha)
}

/// Fourth resistor making the parallel resultants of the two secure
/// states identical. Feasible only while Alice's low resistor stays
/// above the shared parallel resultant, equivalently while the
/// denominator below stays positive.
pub fn match_parallel_fourth(r_ha: f64, r_la: f64, r_lb: f64) -> Result<f64> {
    require_positive(r_ha, "r_ha")?;
    require_positive(r_la, "r_la")?;
    require_positive(r_lb, "r_lb")?;
    let denominator = r_ha * r_la - r_ha * r_lb + r_la * r_lb;
    if denominator <= 0.0 {
        return Err(Error::InfeasibleMatch(format!(
            "no positive r_hb equalizes the parallel resultants for \
             (r_ha={r_ha}, r_la={r_la}, r_lb={r_lb})"
        )));
    }
    Ok(r_ha * r_la * r_lb / denominator)
}

/// Fourth resistor making the serial resultants of the two secure states
/// identical: `r_lb = r_la + r_hb - r_ha`, feasible while that stays
/// positive.
pub fn match_serial_fourth(r_la: f64, r_hb: f64, r_ha: f64) -> Result<f64> {
    require_positive(r_la, "r_la")?;
    require_positive(r_hb, "r_hb")?;
    require_positive(r_ha, "r_ha")?;
    if r_la + r_hb <= r_ha {
        return Err(Error::InfeasibleMatch(format!(
            "r_la + r_hb = {} must exceed r_ha = {r_ha} for a positive \
             serial-matched fourth resistor",
            r_la + r_hb
        )));
    }
    Ok(r_la + r_hb - r_ha)
}

/// Build the quad produced by [`match_parallel_fourth`].
pub fn parallel_matched_quad(r_ha: f64, r_la: f64, r_lb: f64) -> Result<ResistorQuad> {
    let r_hb = match_parallel_fourth(r_ha, r_la, r_lb)?;
    ResistorQuad::new(r_ha, r_lb, r_la, r_hb)
}

/// Build the quad produced by [`match_serial_fourth`].
pub fn serial_matched_quad(r_la: f64, r_hb: f64, r_ha: f64) -> Result<ResistorQuad> {
    let r_lb = match_serial_fourth(r_la, r_hb, r_ha)?;
    ResistorQuad::new(r_ha, r_lb, r_la, r_hb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::levels::resultants;
    use approx::assert_relative_eq;

    #[test]
    fn zero_power_reference_designs() {
        assert_relative_eq!(
            zero_power_fourth(18_000.0, 500.0, 9000.0).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            zero_power_fourth(4500.0, 2000.0, 9000.0).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
        // Classical degenerate case: (r_h, r_l, r_h) -> r_l.
        assert_relative_eq!(
            zero_power_fourth(9000.0, 1000.0, 9000.0).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_power_geometric_mean_exact() {
        let (r_hb, r_la, r_ha) = (12_345.0, 678.0, 4321.0);
        let r_lb = zero_power_fourth(r_hb, r_la, r_ha).unwrap();
        assert_relative_eq!(r_lb * r_ha, r_hb * r_la, max_relative = 1e-12);
    }

    #[test]
    fn parallel_match_reference_designs() {
        let r_hb = match_parallel_fourth(2000.0, 100.0, 90.0).unwrap();
        assert_relative_eq!(r_hb, 620.69, max_relative = 1e-4);
        let r = resultants(&parallel_matched_quad(2000.0, 100.0, 90.0).unwrap());
        assert_relative_eq!(r.r_p_hl, r.r_p_lh, max_relative = 1e-12);
        assert_relative_eq!(r.r_p_hl, 86.1, max_relative = 1e-3);

        let r_hb = match_parallel_fourth(1000.0, 200.0, 160.0).unwrap();
        assert_relative_eq!(r_hb, 444.4, max_relative = 1e-3);
        let r = resultants(&parallel_matched_quad(1000.0, 200.0, 160.0).unwrap());
        assert_relative_eq!(r.r_p_hl, 137.9, max_relative = 1e-3);

        // Classical arrangement maps to itself.
        let r_hb = match_parallel_fourth(10_000.0, 500.0, 500.0).unwrap();
        assert_relative_eq!(r_hb, 10_000.0, max_relative = 1e-12);
    }

    #[test]
    fn parallel_match_infeasible() {
        // Feasibility needs r_la above the HL parallel resultant; here
        // parallel(10k, 10k) = 5k while r_la = 100.
        let err = match_parallel_fourth(10_000.0, 100.0, 10_000.0).unwrap_err();
        assert!(matches!(err, Error::InfeasibleMatch(_)));
    }

    #[test]
    fn serial_match_reference_designs() {
        assert_relative_eq!(
            match_serial_fourth(500.0, 2500.0, 2000.0).unwrap(),
            1000.0,
            max_relative = 1e-12
        );
        let r = resultants(&serial_matched_quad(500.0, 2500.0, 2000.0).unwrap());
        assert_relative_eq!(r.r_s_hl, 3000.0, max_relative = 1e-12);
        assert_relative_eq!(r.r_s_lh, 3000.0, max_relative = 1e-12);

        assert_relative_eq!(
            match_serial_fourth(200.0, 1300.0, 1000.0).unwrap(),
            500.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            match_serial_fourth(5000.0, 10_000.0, 10_000.0).unwrap(),
            5000.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn serial_match_infeasible() {
        let err = match_serial_fourth(100.0, 200.0, 500.0).unwrap_err();
        assert!(matches!(err, Error::InfeasibleMatch(_)));
    }
}
