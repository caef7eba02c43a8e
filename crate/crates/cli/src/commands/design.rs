//! `kljn design`: fourth-resistor calculators plus the full report.

use kljn_core::circuit::{
    full_report, match_parallel_fourth, match_serial_fourth, zero_power_fourth, CableModel,
    FullReport, ResistorQuad,
};
use serde::Serialize;

use crate::commands::ensure_dir;
use crate::output::{label_value_csv, resolve_out_dir, write_csv, write_json, Manifest};
use crate::{CliError, DesignArgs, DesignMode};

#[derive(Serialize)]
struct DesignOutput {
    mode: &'static str,
    computed_resistor: &'static str,
    computed_value_ohm: f64,
    report: FullReport,
}

fn require(value: Option<f64>, name: &str, mode: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| {
        CliError::Message(format!("mode {mode} requires --{name}"))
    })
}

fn forbid(value: Option<f64>, name: &str, mode: &str) -> Result<(), CliError> {
    if value.is_some() {
        return Err(CliError::Message(format!(
            "mode {mode} computes {name}; do not pass --{name}"
        )));
    }
    Ok(())
}

pub fn run(args: DesignArgs) -> Result<(), CliError> {
    let (mode_name, computed_resistor, quad) = match args.mode {
        DesignMode::ZeroPower => {
            forbid(args.r_lb, "r-lb", "zero-power")?;
            let r_hb = require(args.r_hb, "r-hb", "zero-power")?;
            let r_la = require(args.r_la, "r-la", "zero-power")?;
            let r_ha = require(args.r_ha, "r-ha", "zero-power")?;
            let r_lb = zero_power_fourth(r_hb, r_la, r_ha)?;
            ("zero-power", "R_LB", ResistorQuad::new(r_ha, r_lb, r_la, r_hb)?)
        }
        DesignMode::MatchParallel => {
            forbid(args.r_hb, "r-hb", "match-parallel")?;
            let r_ha = require(args.r_ha, "r-ha", "match-parallel")?;
            let r_la = require(args.r_la, "r-la", "match-parallel")?;
            let r_lb = require(args.r_lb, "r-lb", "match-parallel")?;
            let r_hb = match_parallel_fourth(r_ha, r_la, r_lb)?;
            ("match-parallel", "R_HB", ResistorQuad::new(r_ha, r_lb, r_la, r_hb)?)
        }
        DesignMode::MatchSerial => {
            forbid(args.r_lb, "r-lb", "match-serial")?;
            let r_la = require(args.r_la, "r-la", "match-serial")?;
            let r_hb = require(args.r_hb, "r-hb", "match-serial")?;
            let r_ha = require(args.r_ha, "r-ha", "match-serial")?;
            let r_lb = match_serial_fourth(r_la, r_hb, r_ha)?;
            ("match-serial", "R_LB", ResistorQuad::new(r_ha, r_lb, r_la, r_hb)?)
        }
    };

    let cable = CableModel::new(args.cable_length_m, args.cable_cap_per_m, args.cable_ind_per_m)?;
    let report = full_report(&quad, args.u_la, &cable, args.bandwidth_b)?;
    let computed_value = match computed_resistor {
        "R_LB" => quad.r_lb,
        _ => quad.r_hb,
    };

    let dir = resolve_out_dir(args.out.out.as_deref());
    ensure_dir(&dir)?;
    let manifest_input = format!(
        "design mode={mode_name} quad=({}, {}, {}, {}) u_la={} b={} cable=({}, {}, {})",
        quad.r_ha,
        quad.r_lb,
        quad.r_la,
        quad.r_hb,
        args.u_la,
        args.bandwidth_b,
        args.cable_length_m,
        args.cable_cap_per_m,
        args.cable_ind_per_m
    );
    let manifest = Manifest::new("design", &manifest_input, 0);

    if args.out.format.csv() {
        let mut rows = vec![(computed_resistor, computed_value)];
        rows.extend(report.rows());
        write_csv(&dir.join("design.csv"), &manifest, &label_value_csv(&rows))?;
    }
    if args.out.format.json() {
        let output = DesignOutput {
            mode: mode_name,
            computed_resistor,
            computed_value_ohm: computed_value,
            report,
        };
        write_json(&dir.join("design.json"), &manifest, &output)?;
    }
    println!("{computed_resistor} = {computed_value} ohm ({mode_name})");
    println!("wrote design report to {}", dir.display());
    Ok(())
}
