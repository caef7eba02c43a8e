//! `kljn simulate`: run a key-exchange session and write the session
//! record as JSON (config echo, per-period records, key hex, leak
//! summary when the eavesdropper hook is on).

use kljn_core::config::RunConfig;
use kljn_core::noise::{dump_waveform, simulate_bit_period, welch_psd};
use kljn_core::protocol::{run_session, SessionMode, SessionRecord};
use serde::Serialize;

use crate::commands::ensure_dir;
use crate::config_input;
use crate::output::{format_value, resolve_out_dir, write_csv, write_json, Manifest};
use crate::{CliError, SimulateArgs};

#[derive(Serialize)]
struct SessionOutput<'a> {
    config: &'a RunConfig,
    record: &'a SessionRecord,
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let (config, canonical) = config_input::load(&args.config)?;
    let session_cfg = config.session_config()?;
    let record = run_session(&session_cfg)?;

    let dir = resolve_out_dir(args.out.out.as_deref());
    ensure_dir(&dir)?;
    let manifest = Manifest::new("simulate", &canonical, session_cfg.master_seed);
    write_json(
        &dir.join("session.json"),
        &manifest,
        &SessionOutput { config: &config, record: &record },
    )?;

    let wants_waveforms = args.dump_waveforms > 0 || args.dump_psd;
    if wants_waveforms && session_cfg.mode == SessionMode::Analytic {
        return Err(CliError::Message(
            "waveform dumps need mode = \"monte-carlo\"".into(),
        ));
    }
    if wants_waveforms {
        let gens = config.generator_set()?;
        let quad = config.quad()?;
        let cable = config.cable()?;
        let grid = config.grid()?;
        for period in record.periods.iter().take(args.dump_waveforms.max(args.dump_psd as usize)) {
            let sim = simulate_bit_period(
                period.true_state,
                &quad,
                &gens,
                &cable,
                &grid,
                period.seed,
            )?;
            if period.index < args.dump_waveforms {
                let stem = format!("period{:04}", period.index);
                dump_waveform(
                    &sim.wire_voltage,
                    &dir.join(format!("{stem}_voltage.f64")),
                    "V",
                    period.seed,
                )
                .map_err(|e| CliError::io(&dir, e))?;
                dump_waveform(
                    &sim.wire_current,
                    &dir.join(format!("{stem}_current.f64")),
                    "A",
                    period.seed,
                )
                .map_err(|e| CliError::io(&dir, e))?;
            }
            if args.dump_psd && period.index == 0 {
                let spectrum = welch_psd(
                    &sim.wire_voltage,
                    kljn_core::noise::DEFAULT_SEGMENT_LEN.min(sim.wire_voltage.len()),
                    kljn_core::noise::DEFAULT_OVERLAP,
                )?;
                let mut body = String::from("frequency_hz,psd\n");
                for (f, p) in spectrum.frequencies.iter().zip(&spectrum.psd) {
                    body.push_str(&format!("{},{}\n", format_value(*f), format_value(*p)));
                }
                write_csv(&dir.join("psd.csv"), &manifest, &body)?;
            }
        }
    }

    println!(
        "session: {} periods, {} discarded, {} decode errors, key {}",
        record.n_bit_periods,
        record.discard_count,
        record.decode_errors,
        if record.alice_key_hex.is_empty() { "(empty)" } else { &record.alice_key_hex }
    );
    if let Some(leak) = &record.eve_leak {
        println!(
            "eve: p = {:.4} in [{:.4}, {:.4}] over {} secure periods",
            leak.p, leak.wilson_lo, leak.wilson_hi, leak.n_trials
        );
    }
    println!("wrote session record to {}", dir.display());
    Ok(())
}
