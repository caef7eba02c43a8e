//! One-stop design report: every derived quantity of an instance.

use serde::{Deserialize, Serialize};

use super::levels::{resultants, wire_levels};
use super::spectra::{bit_temperatures, crossover_frequencies};
use super::types::{CableModel, ResistorQuad};
use super::vmg::vmg_solve;
use crate::error::Result;

/// All derived quantities for a quad driven by a solved generator set,
/// in the canonical row order of the report output. Field serialization
/// names are the fixed report column labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    #[serde(rename = "R_HA")]
    pub r_ha: f64,
    #[serde(rename = "R_LB")]
    pub r_lb: f64,
    #[serde(rename = "R_LA")]
    pub r_la: f64,
    #[serde(rename = "R_HB")]
    pub r_hb: f64,
    #[serde(rename = "U_HA")]
    pub u_ha: f64,
    #[serde(rename = "U_LB")]
    pub u_lb: f64,
    #[serde(rename = "U_LA")]
    pub u_la: f64,
    #[serde(rename = "U_HB")]
    pub u_hb: f64,
    #[serde(rename = "R_pHL")]
    pub r_p_hl: f64,
    #[serde(rename = "R_pLH")]
    pub r_p_lh: f64,
    #[serde(rename = "R_sHL")]
    pub r_s_hl: f64,
    #[serde(rename = "R_sLH")]
    pub r_s_lh: f64,
    #[serde(rename = "T_uHL")]
    pub t_u_hl: f64,
    #[serde(rename = "T_uLH")]
    pub t_u_lh: f64,
    #[serde(rename = "T_iHL")]
    pub t_i_hl: f64,
    #[serde(rename = "T_iLH")]
    pub t_i_lh: f64,
    #[serde(rename = "U_HL")]
    pub u_hl: f64,
    #[serde(rename = "U_LH")]
    pub u_lh: f64,
    #[serde(rename = "I_HL")]
    pub i_hl: f64,
    #[serde(rename = "I_LH")]
    pub i_lh: f64,
    #[serde(rename = "P_HL")]
    pub p_hl: f64,
    #[serde(rename = "P_LH")]
    pub p_lh: f64,
    #[serde(rename = "f_ucrHL")]
    pub f_ucr_hl: f64,
    #[serde(rename = "f_ucrLH")]
    pub f_ucr_lh: f64,
    #[serde(rename = "f_icrHL")]
    pub f_icr_hl: f64,
    #[serde(rename = "f_icrLH")]
    pub f_icr_lh: f64,
}

impl FullReport {
    /// Rows as `(label, value)` pairs in canonical order, for CSV-style
    /// emission. Infinite crossovers serialize as `inf`.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("R_HA", self.r_ha),
            ("R_LB", self.r_lb),
            ("R_LA", self.r_la),
            ("R_HB", self.r_hb),
            ("U_HA", self.u_ha),
            ("U_LB", self.u_lb),
            ("U_LA", self.u_la),
            ("U_HB", self.u_hb),
            ("R_pHL", self.r_p_hl),
            ("R_pLH", self.r_p_lh),
            ("R_sHL", self.r_s_hl),
            ("R_sLH", self.r_s_lh),
            ("T_uHL", self.t_u_hl),
            ("T_uLH", self.t_u_lh),
            ("T_iHL", self.t_i_hl),
            ("T_iLH", self.t_i_lh),
            ("U_HL", self.u_hl),
            ("U_LH", self.u_lh),
            ("I_HL", self.i_hl),
            ("I_LH", self.i_lh),
            ("P_HL", self.p_hl),
            ("P_LH", self.p_lh),
            ("f_ucrHL", self.f_ucr_hl),
            ("f_ucrLH", self.f_ucr_lh),
            ("f_icrHL", self.f_icr_hl),
            ("f_icrLH", self.f_icr_lh),
        ]
    }

    pub fn row(&self, label: &str) -> Option<f64> {
        self.rows().into_iter().find(|(l, _)| *l == label).map(|(_, v)| v)
    }
}

/// Solve the generators for `u_la` and derive every reported quantity
/// for the instance: voltages, resultants, bit temperatures, wire
/// levels, powers and the four crossover frequencies.
pub fn full_report(
    quad: &ResistorQuad,
    u_la: f64,
    cable: &CableModel,
    bandwidth_b: f64,
) -> Result<FullReport> {
    let gens = vmg_solve(quad, u_la, bandwidth_b)?;
    let r = resultants(quad);
    let levels = wire_levels(quad, &gens);
    let temps = bit_temperatures(&levels, quad, bandwidth_b);
    let crossovers = crossover_frequencies(quad, cable);
    Ok(FullReport {
        r_ha: quad.r_ha,
        r_lb: quad.r_lb,
        r_la: quad.r_la,
        r_hb: quad.r_hb,
        u_ha: gens.u_ha,
        u_lb: gens.u_lb,
        u_la: gens.u_la,
        u_hb: gens.u_hb,
        r_p_hl: r.r_p_hl,
        r_p_lh: r.r_p_lh,
        r_s_hl: r.r_s_hl,
        r_s_lh: r.r_s_lh,
        t_u_hl: temps.t_u_hl,
        t_u_lh: temps.t_u_lh,
        t_i_hl: temps.t_i_hl,
        t_i_lh: temps.t_i_lh,
        u_hl: levels.u_hl,
        u_lh: levels.u_lh,
        i_hl: levels.i_hl,
        i_lh: levels.i_lh,
        p_hl: levels.p_hl,
        p_lh: levels.p_lh,
        f_ucr_hl: crossovers.f_ucr_hl,
        f_ucr_lh: crossovers.f_ucr_lh,
        f_icr_hl: crossovers.f_icr_hl,
        f_icr_lh: crossovers.f_icr_lh,
    })
}
