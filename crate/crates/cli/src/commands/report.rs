//! `kljn report`: full analytic report for a configured instance.

use kljn_core::circuit::full_report;

use crate::commands::ensure_dir;
use crate::config_input;
use crate::output::{label_value_csv, resolve_out_dir, write_csv, write_json, Manifest};
use crate::{CliError, ReportArgs};

pub fn run(args: ReportArgs) -> Result<(), CliError> {
    let (config, canonical) = config_input::load(&args.config)?;
    let report = full_report(
        &config.quad()?,
        config.u_la,
        &config.cable()?,
        config.bandwidth_b,
    )?;

    let dir = resolve_out_dir(args.out.out.as_deref());
    ensure_dir(&dir)?;
    let manifest = Manifest::new("report", &canonical, 0);
    if args.out.format.csv() {
        write_csv(&dir.join("report.csv"), &manifest, &label_value_csv(&report.rows()))?;
    }
    if args.out.format.json() {
        write_json(&dir.join("report.json"), &manifest, &report)?;
    }
    println!("wrote report to {}", dir.display());
    Ok(())
}
