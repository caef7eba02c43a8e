//! Published reference tables and their regeneration.
//!
//! Eight fixture tables pin the expected values of the design equations
//! for a set of canonical instances (classical pairs, zero-power quads,
//! crossover and temperature examples, matched designs). `regenerate`
//! recomputes every cell from the analytic layer and reports the
//! relative deviation from the fixture, flagging anything past 1%.
//! Fixture values are printed to three significant figures, so 1% is the
//! natural comparison tolerance; cells that stay flagged are annotated
//! inline below.

use serde::{Deserialize, Serialize};

use crate::circuit::{
    bit_temperatures, crossover_frequencies, full_report, resultants, wire_levels, CableModel,
    ResistorQuad,
};
use crate::circuit::vmg_solve;
use crate::error::Result;

/// Default comparison tolerance against fixture cells (they carry three
/// significant figures).
pub const FIXTURE_REL_TOL: f64 = 0.01;

/// Reference cable used by every crossover fixture: 2000 m of cable at
/// 100 pF/m and 0.7 uH/m.
pub fn reference_cable() -> CableModel {
    CableModel::new(2000.0, 100e-12, 0.7e-6).expect("reference cable is valid")
}

/// Reference noise bandwidth for the temperature fixtures, hertz.
pub const REFERENCE_BANDWIDTH_HZ: f64 = 1000.0;

/// Quads used across the crossover and temperature fixtures, as
/// `(r_ha, r_lb, r_la, r_hb)`. The first row is the classical instance.
pub const CROSSOVER_QUADS: [[f64; 4]; 3] = [
    [9000.0, 1000.0, 1000.0, 9000.0],
    [10_000.0, 5000.0, 1000.0, 9000.0],
    [5000.0, 5000.0, 1000.0, 9000.0],
];

/// One regenerated cell: fixture value, computed value, relative
/// deviation and the flag raised when the deviation exceeds the
/// tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellReport {
    pub label: String,
    pub expected: f64,
    pub computed: f64,
    pub rel_deviation: f64,
    pub flagged: bool,
}

impl CellReport {
    fn new(label: impl Into<String>, expected: f64, computed: f64) -> Self {
        let rel_deviation = if expected == 0.0 {
            computed.abs()
        } else {
            ((computed - expected) / expected).abs()
        };
        Self {
            label: label.into(),
            expected,
            computed,
            rel_deviation,
            flagged: rel_deviation > FIXTURE_REL_TOL,
        }
    }
}

/// A regenerated table: ordered column labels and per-column cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableReport {
    pub name: String,
    pub columns: Vec<String>,
    /// cells[column][row]
    pub cells: Vec<Vec<CellReport>>,
}

impl TableReport {
    pub fn flagged_cells(&self) -> Vec<&CellReport> {
        self.cells.iter().flatten().filter(|c| c.flagged).collect()
    }

    pub fn cell(&self, column: &str, label: &str) -> Option<&CellReport> {
        let idx = self.columns.iter().position(|c| c == column)?;
        self.cells[idx].iter().find(|c| c.label == label)
    }
}

/// Table 1: zero-power instances. Columns A (classical), B, C. Rows are
/// generator voltages, resistor temperatures, wire levels and powers for
/// u_la = 1 V, B = 1 kHz.
pub fn table1() -> Result<TableReport> {
    let quads = [
        [9000.0, 1000.0, 1000.0, 9000.0],
        [9000.0, 1000.0, 500.0, 18_000.0],
        [9000.0, 1000.0, 2000.0, 4500.0],
    ];
    let expected: [&[(&str, f64)]; 3] = [
        &[
            ("U_HA", 3.0),
            ("U_LB", 1.0),
            ("U_LA", 1.0),
            ("U_HB", 3.0),
            ("T_HA", 1.81e16),
            ("T_LB", 1.81e16),
            ("T_LA", 1.81e16),
            ("T_HB", 1.81e16),
            ("U_HL", 0.948),
            ("U_LH", 0.948),
            ("I_HL", 3.16e-4),
            ("I_LH", 3.16e-4),
            ("P_HL", 0.0),
            ("P_LH", 0.0),
        ],
        &[
            ("U_HA", 3.12),
            ("U_LB", 1.04),
            ("U_LA", 1.0),
            ("U_HB", 6.0),
            ("T_HA", 1.96e16),
            ("T_LB", 1.96e16),
            ("T_LA", 3.62e16),
            ("T_HB", 3.62e16),
            ("U_HL", 0.986),
            ("U_LH", 0.986),
            ("I_HL", 3.29e-4),
            ("I_LH", 3.29e-4),
            ("P_HL", 0.0),
            ("P_LH", 0.0),
        ],
        &[
            ("U_HA", 2.63),
            ("U_LB", 0.877),
            ("U_LA", 1.0),
            ("U_HB", 1.5),
            ("T_HA", 1.39e16),
            ("T_LB", 1.39e16),
            ("T_LA", 9.06e15),
            ("T_HB", 9.06e15),
            ("U_HL", 0.832),
            ("U_LH", 0.832),
            ("I_HL", 2.77e-4),
            ("I_LH", 2.77e-4),
            ("P_HL", 0.0),
            ("P_LH", 0.0),
        ],
    ];

    let mut cells = Vec::new();
    for (quad_values, column) in quads.iter().zip(&expected) {
        let quad = ResistorQuad::new(quad_values[0], quad_values[1], quad_values[2], quad_values[3])?;
        let gens = vmg_solve(&quad, 1.0, REFERENCE_BANDWIDTH_HZ)?;
        let temps = crate::circuit::temperatures(&quad, &gens);
        let levels = wire_levels(&quad, &gens);
        let computed = |label: &str| -> f64 {
            match label {
                "U_HA" => gens.u_ha,
                "U_LB" => gens.u_lb,
                "U_LA" => gens.u_la,
                "U_HB" => gens.u_hb,
                "T_HA" => temps.t_ha,
                "T_LB" => temps.t_lb,
                "T_LA" => temps.t_la,
                "T_HB" => temps.t_hb,
                "U_HL" => levels.u_hl,
                "U_LH" => levels.u_lh,
                "I_HL" => levels.i_hl,
                "I_LH" => levels.i_lh,
                "P_HL" => levels.p_hl,
                "P_LH" => levels.p_lh,
                other => unreachable!("unknown row {other}"),
            }
        };
        cells.push(
            column
                .iter()
                .map(|(label, value)| CellReport::new(*label, *value, computed(label)))
                .collect(),
        );
    }
    Ok(TableReport {
        name: "table1_zero_power_instances".into(),
        columns: vec!["A".into(), "B".into(), "C".into()],
        cells,
    })
}

fn crossover_table(
    name: &str,
    labels: [&str; 4],
    expected_rows: [[f64; 4]; 3],
    pick: impl Fn(&ResistorQuad, &CableModel) -> [f64; 4],
    cable: CableModel,
) -> Result<TableReport> {
    let mut cells = Vec::new();
    for (quad_values, expected) in CROSSOVER_QUADS.iter().zip(&expected_rows) {
        let quad = ResistorQuad::new(quad_values[0], quad_values[1], quad_values[2], quad_values[3])?;
        let computed = pick(&quad, &cable);
        cells.push(
            labels
                .iter()
                .zip(expected.iter().zip(computed))
                .map(|(label, (exp, comp))| CellReport::new(*label, *exp, comp))
                .collect(),
        );
    }
    Ok(TableReport {
        name: name.into(),
        columns: vec!["row1".into(), "row2".into(), "row3".into()],
        cells,
    })
}

/// Table 2: voltage-noise crossover frequencies and parallel resultants.
pub fn table2() -> Result<TableReport> {
    crossover_table(
        "table2_voltage_crossovers",
        ["R_pHL", "R_pLH", "f_ucrHL", "f_ucrLH"],
        [
            [900.0, 900.0, 884.0, 884.0],
            [3330.0, 900.0, 239.0, 884.0],
            [2500.0, 900.0, 318.0, 884.0],
        ],
        |quad, cable| {
            let r = resultants(quad);
            let f = crossover_frequencies(quad, cable);
            [r.r_p_hl, r.r_p_lh, f.f_ucr_hl, f.f_ucr_lh]
        },
        reference_cable(),
    )
}

/// Table 3: current-noise crossover frequencies and serial resultants.
pub fn table3() -> Result<TableReport> {
    crossover_table(
        "table3_current_crossovers",
        ["R_sHL", "R_sLH", "f_icrHL", "f_icrLH"],
        [
            [10_000.0, 10_000.0, 1.14e6, 1.14e6],
            [15_000.0, 10_000.0, 1.71e6, 1.14e6],
            [10_000.0, 10_000.0, 1.14e6, 1.14e6],
        ],
        |quad, cable| {
            let r = resultants(quad);
            let f = crossover_frequencies(quad, cable);
            [r.r_s_hl, r.r_s_lh, f.f_icr_hl, f.f_icr_lh]
        },
        reference_cable(),
    )
}

fn temperature_table(
    name: &str,
    labels: [&str; 2],
    expected_rows: [[f64; 2]; 3],
    pick: impl Fn(&crate::circuit::BitTemperatures) -> [f64; 2],
) -> Result<TableReport> {
    let mut cells = Vec::new();
    for (quad_values, expected) in CROSSOVER_QUADS.iter().zip(&expected_rows) {
        let quad = ResistorQuad::new(quad_values[0], quad_values[1], quad_values[2], quad_values[3])?;
        let gens = vmg_solve(&quad, 1.0, REFERENCE_BANDWIDTH_HZ)?;
        let levels = wire_levels(&quad, &gens);
        let temps = bit_temperatures(&levels, &quad, REFERENCE_BANDWIDTH_HZ);
        let computed = pick(&temps);
        cells.push(
            labels
                .iter()
                .zip(expected.iter().zip(computed))
                .map(|(label, (exp, comp))| CellReport::new(*label, *exp, comp))
                .collect(),
        );
    }
    Ok(TableReport {
        name: name.into(),
        columns: vec!["row1".into(), "row2".into(), "row3".into()],
        cells,
    })
}

/// Table 4: voltage bit-temperatures.
///
/// The row-3 LH fixture (1.65e16 K) deviates ~1.6% from the exact
/// generator solution (1.68e16 K) and stays flagged; rows 1-2 and the
/// row-3 HL cell reproduce within tolerance.
pub fn table4() -> Result<TableReport> {
    temperature_table(
        "table4_voltage_bit_temperatures",
        ["T_uHL", "T_uLH"],
        [
            [1.81e16, 1.81e16],
            [4.48e15, 1.66e16],
            [6.04e15, 1.65e16],
        ],
        |t| [t.t_u_hl, t.t_u_lh],
    )
}

/// Table 5: current bit-temperatures.
pub fn table5() -> Result<TableReport> {
    temperature_table(
        "table5_current_bit_temperatures",
        ["T_iHL", "T_iLH"],
        [
            [1.81e16, 1.81e16],
            [6.54e15, 4.36e15],
            [6.04e15, 6.04e15],
        ],
        |t| [t.t_i_hl, t.t_i_lh],
    )
}

/// Table 6: parallel-matched designs (identical R_p in both states).
pub fn table6() -> Result<TableReport> {
    let triples = [
        (2000.0, 100.0, 90.0),
        (1000.0, 200.0, 160.0),
        (10_000.0, 500.0, 500.0),
    ];
    let expected = [
        [620.7, 86.1, 86.1],
        [444.4, 137.9, 137.9],
        [10_000.0, 476.2, 476.2],
    ];
    let mut cells = Vec::new();
    for ((r_ha, r_la, r_lb), exp) in triples.iter().zip(&expected) {
        let quad = crate::circuit::parallel_matched_quad(*r_ha, *r_la, *r_lb)?;
        let r = resultants(&quad);
        cells.push(vec![
            CellReport::new("R_HB", exp[0], quad.r_hb),
            CellReport::new("R_pHL", exp[1], r.r_p_hl),
            CellReport::new("R_pLH", exp[2], r.r_p_lh),
        ]);
    }
    Ok(TableReport {
        name: "table6_parallel_matched_designs".into(),
        columns: vec!["A".into(), "B".into(), "C".into()],
        cells,
    })
}

/// Table 7: serial-matched designs (identical R_s in both states).
pub fn table7() -> Result<TableReport> {
    let triples = [
        (500.0, 2500.0, 2000.0),
        (200.0, 1300.0, 1000.0),
        (5000.0, 10_000.0, 10_000.0),
    ];
    let expected = [
        [1000.0, 3000.0, 3000.0],
        [500.0, 1500.0, 1500.0],
        [5000.0, 15_000.0, 15_000.0],
    ];
    let mut cells = Vec::new();
    for ((r_la, r_hb, r_ha), exp) in triples.iter().zip(&expected) {
        let quad = crate::circuit::serial_matched_quad(*r_la, *r_hb, *r_ha)?;
        let r = resultants(&quad);
        cells.push(vec![
            CellReport::new("R_LB", exp[0], quad.r_lb),
            CellReport::new("R_sHL", exp[1], r.r_s_hl),
            CellReport::new("R_sLH", exp[2], r.r_s_lh),
        ]);
    }
    Ok(TableReport {
        name: "table7_serial_matched_designs".into(),
        columns: vec!["A".into(), "B".into(), "C".into()],
        cells,
    })
}

/// Table 8: complete derived report for three practical instances —
/// parallel-matched (A), serial-matched (B) and classical (C) — over the
/// reference cable at B = 1 kHz.
pub fn table8() -> Result<TableReport> {
    let quads = [
        [2000.0, 90.0, 100.0, 620.69],
        [100.0, 10.0, 50.0, 60.0],
        [10_000.0, 1000.0, 1000.0, 10_000.0],
    ];
    let expected: [&[(&str, f64)]; 3] = [
        &[
            ("U_HA", 6.32),
            ("U_LB", 0.9),
            ("U_LA", 1.0),
            ("U_HB", 1.96),
            ("R_pHL", 86.1),
            ("R_pLH", 86.1),
            ("R_sHL", 2090.0),
            ("R_sLH", 720.69),
            ("T_uHL", 1.72e17),
            ("T_uLH", 1.72e17),
            ("T_iHL", 3.54e17),
            ("T_iLH", 1.22e17),
            ("U_HL", 0.903),
            ("U_LH", 0.903),
            ("I_HL", 0.00306),
            ("I_LH", 0.00306),
            ("P_HL", 4.53e-4),
            ("P_LH", 4.53e-4),
            ("f_ucrHL", 9239.0),
            ("f_ucrLH", 9239.0),
            ("f_icrHL", 237_596.0),
            ("f_icrLH", 81_930.0),
        ],
        &[
            ("U_HA", 1.63),
            ("U_LB", 1.0),
            ("U_LA", 1.0),
            ("U_HB", 1.63),
            ("R_pHL", 9.09),
            ("R_pLH", 27.3),
            ("R_sHL", 110.0),
            ("R_sLH", 110.0),
            ("T_uHL", 1.69e18),
            ("T_uLH", 5.64e17),
            ("T_iHL", 6.04e17),
            ("T_iLH", 6.04e17),
            ("U_HL", 0.921),
            ("U_LH", 0.921),
            ("I_HL", 0.0174),
            ("I_LH", 0.0174),
            ("P_HL", -0.00606),
            ("P_LH", -0.00606),
            ("f_ucrHL", 87_535.0),
            ("f_ucrLH", 29_178.0),
            ("f_icrHL", 12_505.0),
            ("f_icrLH", 12_505.0),
        ],
        &[
            ("U_HA", 3.16),
            ("U_LB", 1.0),
            ("U_LA", 1.0),
            ("U_HB", 3.16),
            ("R_pHL", 909.0),
            ("R_pLH", 909.0),
            ("R_sHL", 11_000.0),
            ("R_sLH", 11_000.0),
            ("T_uHL", 1.81e16),
            ("T_uLH", 1.81e16),
            ("T_iHL", 1.81e16),
            ("T_iLH", 1.81e16),
            ("U_HL", 0.953),
            ("U_LH", 0.953),
            ("I_HL", 3.02e-4),
            ("I_LH", 3.02e-4),
            ("P_HL", 0.0),
            ("P_LH", 0.0),
            ("f_ucrHL", 875.0),
            ("f_ucrLH", 875.0),
            ("f_icrHL", 1.25e6),
            ("f_icrLH", 1.25e6),
        ],
    ];

    let cable = reference_cable();
    let mut cells = Vec::new();
    for (quad_values, column) in quads.iter().zip(&expected) {
        let quad = ResistorQuad::new(quad_values[0], quad_values[1], quad_values[2], quad_values[3])?;
        let report = full_report(&quad, 1.0, &cable, REFERENCE_BANDWIDTH_HZ)?;
        cells.push(
            column
                .iter()
                .map(|(label, value)| {
                    let computed = report.row(label).expect("report row exists");
                    CellReport::new(*label, *value, computed)
                })
                .collect(),
        );
    }
    Ok(TableReport {
        name: "table8_full_design_examples".into(),
        columns: vec!["A".into(), "B".into(), "C".into()],
        cells,
    })
}

/// Regenerate all eight reference tables.
pub fn regenerate_all() -> Result<Vec<TableReport>> {
    Ok(vec![
        table1()?,
        table2()?,
        table3()?,
        table4()?,
        table5()?,
        table6()?,
        table7()?,
        table8()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_cells_match() {
        let t2 = table2().unwrap();
        let cell = t2.cell("row2", "f_ucrHL").unwrap();
        assert!(!cell.flagged, "f_ucrHL row2: {cell:?}");
        assert!((cell.computed - 239.0).abs() / 239.0 < 5e-3);

        let t5 = table5().unwrap();
        let cell = t5.cell("row2", "T_iLH").unwrap();
        assert!(!cell.flagged, "T_iLH row2: {cell:?}");

        let t8 = table8().unwrap();
        let cell = t8.cell("A", "f_icrLH").unwrap();
        assert!(!cell.flagged, "f_icrLH A: {cell:?}");
        assert!((cell.computed - 81_930.0).abs() / 81_930.0 < 5e-3);
    }

    #[test]
    fn only_known_cell_flagged() {
        // Every fixture cell reproduces within 1% except the row-3 LH
        // voltage temperature, whose printed value is inconsistent with
        // the exact generator solution.
        let all = regenerate_all().unwrap();
        let flagged: Vec<String> = all
            .iter()
            .flat_map(|t| {
                t.flagged_cells()
                    .into_iter()
                    .map(move |c| format!("{}:{}", t.name, c.label))
            })
            .collect();
        assert_eq!(flagged, vec!["table4_voltage_bit_temperatures:T_uLH".to_string()]);
    }

    #[test]
    fn power_columns_zero_at_scale() {
        let t1 = table1().unwrap();
        for column in ["A", "B", "C"] {
            for label in ["P_HL", "P_LH"] {
                let cell = t1.cell(column, label).unwrap();
                assert!(cell.computed.abs() < 1e-13, "{column}/{label}: {cell:?}");
            }
        }
    }
}
