//! `kljn attack`: passive-attack campaign over the configured grid.
//!
//! Each grid point writes its own trial log (JSON lines) and leak
//! report; the merged summary CSV is assembled from points sorted by
//! key, so reruns are byte-identical apart from the timestamp lines.

use kljn_core::attacks::{AttackKind, ChannelSelection, LeakReport, TrialRecord};
use kljn_core::config::GridPoint;
use rayon_free::run_points;

use crate::commands::ensure_dir;
use crate::config_input;
use crate::output::{format_value, resolve_out_dir, write_csv, write_json, Manifest};
use crate::{AttackArgs, CliError};

/// Sequential point runner; the trial batches inside each point already
/// saturate the worker pool.
mod rayon_free {
    use super::*;
    use kljn_core::attacks::run_trials;

    pub fn run_points(
        points: &[GridPoint],
    ) -> Result<Vec<(String, Vec<TrialRecord>, LeakReport)>, kljn_core::Error> {
        points
            .iter()
            .map(|point| {
                let (records, leak) = run_trials(&point.config)?;
                Ok((point.key.clone(), records, leak))
            })
            .collect()
    }
}

fn attack_name(kind: AttackKind) -> &'static str {
    match kind {
        AttackKind::Crossover => "crossover",
        AttackKind::Temperature => "temperature",
    }
}

fn channels_name(channels: ChannelSelection) -> &'static str {
    match channels {
        ChannelSelection::Voltage => "voltage",
        ChannelSelection::Current => "current",
        ChannelSelection::Both => "both",
    }
}

pub fn run(args: AttackArgs) -> Result<(), CliError> {
    let (config, canonical) = config_input::load(&args.config)?;
    let points = config.attack_grid()?;
    let seed = config.attack.as_ref().map(|a| a.master_seed).unwrap_or(0);

    let dir = resolve_out_dir(args.out.out.as_deref());
    ensure_dir(&dir)?;
    let manifest = Manifest::new("attack", &canonical, seed);

    let results = run_points(&points)?;

    let mut summary = String::from(
        "key,r_ha,r_lb,r_la,r_hb,bandwidth_b,length_m,cap_per_m,ind_per_m,\
         attack,channels,n_trials,n_correct,p,wilson_lo,wilson_hi\n",
    );
    for ((key, records, leak), point) in results.iter().zip(&points) {
        // Trial log: manifest lines first, then one JSON object per trial.
        let mut log = format!(
            "{{\"generated_at\":\"{}\"}}\n{}\n",
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            serde_json::to_string(&manifest)
                .map_err(|e| CliError::Message(format!("serialize manifest: {e}")))?
        );
        for record in records {
            log.push_str(
                &serde_json::to_string(record)
                    .map_err(|e| CliError::Message(format!("serialize trial: {e}")))?,
            );
            log.push('\n');
        }
        let log_path = dir.join(format!("trials_{key}.jsonl"));
        std::fs::write(&log_path, log).map_err(|e| CliError::io(&log_path, e))?;

        write_json(&dir.join(format!("leak_{key}.json")), &manifest, leak)?;

        let c = &point.config;
        summary.push_str(&format!(
            "{key},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            format_value(c.quad.r_ha),
            format_value(c.quad.r_lb),
            format_value(c.quad.r_la),
            format_value(c.quad.r_hb),
            format_value(c.gens.bandwidth_b),
            format_value(c.cable.length_m),
            format_value(c.cable.cap_per_m),
            format_value(c.cable.ind_per_m),
            attack_name(c.attack),
            channels_name(c.channels),
            leak.n_trials,
            leak.n_correct,
            format_value(leak.p),
            format_value(leak.wilson_lo),
            format_value(leak.wilson_hi),
        ));
        println!(
            "{key}: p = {:.4} in [{:.4}, {:.4}] ({} trials)",
            leak.p, leak.wilson_lo, leak.wilson_hi, leak.n_trials
        );
    }
    write_csv(&dir.join("summary.csv"), &manifest, &summary)?;
    println!("wrote {} grid points to {}", points.len(), dir.display());
    Ok(())
}
