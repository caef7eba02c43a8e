//! Generator-voltage solution for four freely chosen resistors.
//!
//! The secure states must present identical wire voltage, identical wire
//! current and identical net power to a passive observer. With the low-A
//! generator voltage fixed, those three conditions are linear in the
//! three remaining squared generator voltages. We solve that 3x3 system
//! directly and then verify the candidate against the three conditions;
//! a negative squared voltage or a singular system means the quad has no
//! physical solution and is rejected, never clamped.

use serde::{Deserialize, Serialize};

use super::levels::{net_power, resultants, wire_current_ms, wire_voltage_ms};
use super::types::{BitState, GeneratorSet, ResistorQuad, BOLTZMANN};
use crate::error::{Error, Result};

/// Relative tolerance for the post-solve verification of the three
/// security conditions.
pub const VMG_VERIFY_REL_TOL: f64 = 1e-9;

/// Solve for the generator set that makes the two secure states
/// indistinguishable in wire voltage, current and power, given the
/// freely chosen RMS voltage `u_la` of the low-A generator.
pub fn vmg_solve(quad: &ResistorQuad, u_la: f64, bandwidth_b: f64) -> Result<GeneratorSet> {
    if !(u_la.is_finite() && u_la > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "u_la must be finite and > 0, got {u_la}"
        )));
    }
    if !(bandwidth_b.is_finite() && bandwidth_b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth_b must be finite and > 0, got {bandwidth_b}"
        )));
    }

    let a = quad.r_ha;
    let b = quad.r_lb;
    let c = quad.r_la;
    let d = quad.r_hb;
    let u2 = u_la * u_la;
    let s_hl = (a + b) * (a + b);
    let s_lh = (c + d) * (c + d);

    // Unknowns: x = U_HA^2, y = U_LB^2, z = U_HB^2.
    // Row 1: equal mean-square wire voltage between HL and LH.
    // Row 2: equal mean-square loop current.
    // Row 3: equal net Alice-to-Bob power.
    let matrix = [
        [b * b / s_hl, a * a / s_hl, -c * c / s_lh],
        [1.0 / s_hl, 1.0 / s_hl, -1.0 / s_lh],
        [b / s_hl, -a / s_hl, c / s_lh],
    ];
    let rhs = [u2 * d * d / s_lh, u2 / s_lh, u2 * d / s_lh];

    let singular = || {
        Error::UnphysicalQuad(format!(
            "constraint system singular for quad ({a}, {b}, {c}, {d})"
        ))
    };
    let mut solution = solve_3x3(&matrix, &rhs).ok_or_else(singular)?;
    // One step of iterative refinement keeps the verification below tight
    // even for strongly unbalanced resistor ratios.
    let residual = [
        rhs[0] - dot(&matrix[0], &solution),
        rhs[1] - dot(&matrix[1], &solution),
        rhs[2] - dot(&matrix[2], &solution),
    ];
    let correction = solve_3x3(&matrix, &residual).ok_or_else(singular)?;
    for (s, c) in solution.iter_mut().zip(correction) {
        *s += c;
    }
    let [x, y, z] = solution;

    for (value, name) in [(x, "u_ha"), (y, "u_lb"), (z, "u_hb")] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::UnphysicalQuad(format!(
                "squared voltage {name}^2 = {value} for quad ({a}, {b}, {c}, {d})"
            )));
        }
    }

    let gens = GeneratorSet::new(x.sqrt(), y.sqrt(), u_la, z.sqrt(), bandwidth_b)?;
    verify_security_conditions(quad, &gens, VMG_VERIFY_REL_TOL)?;
    Ok(gens)
}

/// Check the three security conditions for a generator set. Power is
/// compared on the natural scale `u_la^2 / r_s_lh` so a zero-power pair
/// does not trip the relative test.
pub fn verify_security_conditions(
    quad: &ResistorQuad,
    gens: &GeneratorSet,
    rel_tol: f64,
) -> Result<()> {
    let u_hl = wire_voltage_ms(quad, gens, BitState::HL);
    let u_lh = wire_voltage_ms(quad, gens, BitState::LH);
    let i_hl = wire_current_ms(quad, gens, BitState::HL);
    let i_lh = wire_current_ms(quad, gens, BitState::LH);
    let p_hl = net_power(quad, gens, BitState::HL);
    let p_lh = net_power(quad, gens, BitState::LH);
    let power_scale = gens.u_la * gens.u_la / resultants(quad).r_s_lh;

    let voltage_ok = (u_hl - u_lh).abs() <= rel_tol * u_hl.abs().max(u_lh.abs());
    let current_ok = (i_hl - i_lh).abs() <= rel_tol * i_hl.abs().max(i_lh.abs());
    let power_ok = (p_hl - p_lh).abs() <= rel_tol * power_scale;
    if voltage_ok && current_ok && power_ok {
        Ok(())
    } else {
        Err(Error::UnphysicalQuad(format!(
            "solution fails security conditions: dU2={:e} dI2={:e} dP={:e}",
            u_hl - u_lh,
            i_hl - i_lh,
            p_hl - p_lh
        )))
    }
}

fn dot(row: &[f64; 3], v: &[f64; 3]) -> f64 {
    row[0] * v[0] + row[1] * v[1] + row[2] * v[2]
}

/// Gaussian elimination with partial pivoting. Returns None when the
/// system is singular at working precision.
fn solve_3x3(matrix: &[[f64; 3]; 3], rhs: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0_f64; 4]; 3];
    for (row, (coeffs, b)) in matrix.iter().zip(rhs).enumerate() {
        m[row][..3].copy_from_slice(coeffs);
        m[row][3] = *b;
    }

    // Row equilibration: the three condition rows live on wildly
    // different scales (ohms^2, unitless, ohms), so normalize each row
    // before judging pivots.
    for row in m.iter_mut() {
        let rmax = row[..3].iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if rmax == 0.0 {
            return None;
        }
        for v in row.iter_mut() {
            *v /= rmax;
        }
    }
    let tiny = 1e-12;

    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot_row][col].abs() < tiny {
            return None;
        }
        m.swap(col, pivot_row);
        for row in (col + 1)..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }

    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in (row + 1)..3 {
            acc -= m[row][k] * out[k];
        }
        out[row] = acc / m[row][row];
    }
    Some(out)
}

/// Effective temperatures of the four resistors, kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResistorTemperatures {
    pub t_ha: f64,
    pub t_lb: f64,
    pub t_la: f64,
    pub t_hb: f64,
}

/// Map each generator voltage to the temperature its resistor must sit at
/// to produce that RMS within the shared bandwidth: `T = U^2/(4 k R B)`.
pub fn temperatures(quad: &ResistorQuad, gens: &GeneratorSet) -> ResistorTemperatures {
    let b = gens.bandwidth_b;
    let temp = |u: f64, r: f64| u * u / (4.0 * BOLTZMANN * r * b);
    ResistorTemperatures {
        t_ha: temp(gens.u_ha, quad.r_ha),
        t_lb: temp(gens.u_lb, quad.r_lb),
        t_la: temp(gens.u_la, quad.r_la),
        t_hb: temp(gens.u_hb, quad.r_hb),
    }
}

/// Closed-form solution of the same constraint system, used as an
/// independent cross-check of the linear solver. The three conditions
/// factor into products of resistor sums and differences.
#[doc(hidden)]
pub fn vmg_closed_form(quad: &ResistorQuad, u_la: f64) -> (f64, f64, f64) {
    let a = quad.r_ha;
    let b = quad.r_lb;
    let c = quad.r_la;
    let d = quad.r_hb;
    let u2 = u_la * u_la;
    let x = u2 * (a + b) * (a + d) / ((b + c) * (c + d));
    let y = u2 * (a + b) * (b - d) / ((c - a) * (c + d));
    let z = u2 * (a + d) * (b - d) / ((b + c) * (c - a));
    (x, y, z)
}
