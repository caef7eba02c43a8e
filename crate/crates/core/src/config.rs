//! Declarative run configuration.
//!
//! One TOML file drives every subcommand. Top level: `u_la`,
//! `bandwidth_b`, `[quad]`, `[cable]`, `[grid]`; the `[session]`,
//! `[attack]` and `[sweep]` sections configure their respective runs.
//! See the repository README for the documented schema and examples.

use serde::{Deserialize, Serialize};

use crate::attacks::{AttackKind, AttackTrialConfig, ChannelSelection, EveMeasureParams};
use crate::circuit::{vmg_solve, BitState, CableModel, GeneratorSet, ResistorQuad};
use crate::error::{Error, Result};
use crate::noise::SimulationGrid;
use crate::protocol::{BitConvention, EveConfig, SessionConfig, SessionMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Freely chosen RMS voltage of the low-A generator, volts.
    pub u_la: f64,
    /// Generator noise bandwidth, hertz.
    pub bandwidth_b: f64,
    pub quad: QuadSection,
    pub cable: CableSection,
    pub grid: GridSection,
    /// Explicit generator voltages; omit to solve them from `u_la`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<SessionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub r_ha: f64,
    pub r_lb: f64,
    pub r_la: f64,
    pub r_hb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableSection {
    pub length_m: f64,
    pub cap_per_m: f64,
    pub ind_per_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorsSection {
    pub u_ha: f64,
    pub u_lb: f64,
    pub u_la: f64,
    pub u_hb: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionSection {
    pub n_bit_periods: usize,
    pub master_seed: u64,
    #[serde(default = "default_convention")]
    pub bit_convention: BitConvention,
    #[serde(default = "default_mode")]
    pub mode: SessionMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_state: Option<BitState>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eve: Option<EveSection>,
}

fn default_convention() -> BitConvention {
    BitConvention::HlIsOne
}

fn default_mode() -> SessionMode {
    SessionMode::MonteCarlo
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EveSection {
    pub attack: AttackKind,
    pub channels: ChannelSelection,
    #[serde(default = "default_segment_len")]
    pub welch_segment_len: usize,
    #[serde(default = "default_overlap")]
    pub welch_overlap: f64,
    #[serde(default = "default_eval_points")]
    pub n_eval_points: usize,
}

fn default_segment_len() -> usize {
    crate::noise::DEFAULT_SEGMENT_LEN
}

fn default_overlap() -> f64 {
    crate::noise::DEFAULT_OVERLAP
}

fn default_eval_points() -> usize {
    8
}

impl EveSection {
    fn measure_params(&self) -> EveMeasureParams {
        EveMeasureParams {
            welch_segment_len: self.welch_segment_len,
            welch_overlap: self.welch_overlap,
            n_eval_points: self.n_eval_points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSection {
    pub attack: AttackKind,
    pub channels: ChannelSelection,
    pub n_trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub analytic: bool,
    #[serde(default = "default_segment_len")]
    pub welch_segment_len: usize,
    #[serde(default = "default_overlap")]
    pub welch_overlap: f64,
    #[serde(default = "default_eval_points")]
    pub n_eval_points: usize,
}

/// Campaign sweep axes; the cross product of all non-empty axes is run,
/// with the base configuration filling the rest.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub quads: Vec<QuadSection>,
    #[serde(default)]
    pub bandwidths: Vec<f64>,
    #[serde(default)]
    pub cables: Vec<CableSection>,
}

/// One expanded campaign grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    /// Stable sort key, e.g. `q0_b1_c0`.
    pub key: String,
    pub config: AttackTrialConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config parse error: {e}")))?;
        cfg.validated()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Run all constructor validations so a bad file fails loudly.
    fn validated(&self) -> Result<()> {
        self.quad()?;
        self.cable()?;
        self.grid()?;
        if let Some(g) = &self.generators {
            GeneratorSet::new(g.u_ha, g.u_lb, g.u_la, g.u_hb, self.bandwidth_b)?;
        }
        if let Some(sweep) = &self.sweep {
            for q in &sweep.quads {
                ResistorQuad::new(q.r_ha, q.r_lb, q.r_la, q.r_hb)?;
            }
            for c in &sweep.cables {
                CableModel::new(c.length_m, c.cap_per_m, c.ind_per_m)?;
            }
            for &b in &sweep.bandwidths {
                if !(b.is_finite() && b > 0.0) {
                    return Err(Error::InvalidParameter(format!("sweep bandwidth {b}")));
                }
            }
        }
        Ok(())
    }

    pub fn quad(&self) -> Result<ResistorQuad> {
        ResistorQuad::new(self.quad.r_ha, self.quad.r_lb, self.quad.r_la, self.quad.r_hb)
    }

    pub fn cable(&self) -> Result<CableModel> {
        CableModel::new(self.cable.length_m, self.cable.cap_per_m, self.cable.ind_per_m)
    }

    pub fn grid(&self) -> Result<SimulationGrid> {
        SimulationGrid::new(self.grid.sample_rate_hz, self.grid.duration_s)
    }

    /// The generator set: explicit values if configured, otherwise the
    /// solved set for `u_la`.
    pub fn generator_set(&self) -> Result<GeneratorSet> {
        match &self.generators {
            Some(g) => GeneratorSet::new(g.u_ha, g.u_lb, g.u_la, g.u_hb, self.bandwidth_b),
            None => vmg_solve(&self.quad()?, self.u_la, self.bandwidth_b),
        }
    }

    pub fn session_config(&self) -> Result<SessionConfig> {
        let section = self.session.as_ref().ok_or_else(|| {
            Error::InvalidParameter("config has no [session] section".into())
        })?;
        Ok(SessionConfig {
            quad: self.quad()?,
            u_la: self.u_la,
            bandwidth_b: self.bandwidth_b,
            generators: match &self.generators {
                Some(g) => Some(GeneratorSet::new(
                    g.u_ha,
                    g.u_lb,
                    g.u_la,
                    g.u_hb,
                    self.bandwidth_b,
                )?),
                None => None,
            },
            cable: self.cable()?,
            grid: self.grid()?,
            n_bit_periods: section.n_bit_periods,
            master_seed: section.master_seed,
            bit_convention: section.bit_convention,
            mode: section.mode,
            forced_state: section.forced_state,
            eve: section.eve.as_ref().map(|e| EveConfig {
                attack: e.attack,
                channels: e.channels,
                measure: e.measure_params(),
            }),
        })
    }

    /// Expand the attack campaign into its grid points (a single point
    /// when no sweep is configured), sorted by key.
    pub fn attack_grid(&self) -> Result<Vec<GridPoint>> {
        let section = self.attack.as_ref().ok_or_else(|| {
            Error::InvalidParameter("config has no [attack] section".into())
        })?;
        let sweep = self.sweep.clone().unwrap_or_default();
        let quads = if sweep.quads.is_empty() { vec![self.quad] } else { sweep.quads };
        let bandwidths = if sweep.bandwidths.is_empty() {
            vec![self.bandwidth_b]
        } else {
            sweep.bandwidths
        };
        let cables = if sweep.cables.is_empty() { vec![self.cable] } else { sweep.cables };

        let mut points = Vec::new();
        for (qi, q) in quads.iter().enumerate() {
            let quad = ResistorQuad::new(q.r_ha, q.r_lb, q.r_la, q.r_hb)?;
            for (bi, &bandwidth) in bandwidths.iter().enumerate() {
                let gens = match &self.generators {
                    Some(g) => GeneratorSet::new(g.u_ha, g.u_lb, g.u_la, g.u_hb, bandwidth)?,
                    None => vmg_solve(&quad, self.u_la, bandwidth)?,
                };
                for (ci, c) in cables.iter().enumerate() {
                    let cable = CableModel::new(c.length_m, c.cap_per_m, c.ind_per_m)?;
                    points.push(GridPoint {
                        key: format!("q{qi}_b{bi}_c{ci}"),
                        config: AttackTrialConfig {
                            quad,
                            gens,
                            cable,
                            grid: self.grid()?,
                            attack: section.attack,
                            channels: section.channels,
                            n_trials: section.n_trials,
                            master_seed: section.master_seed,
                            analytic: section.analytic,
                            measure: EveMeasureParams {
                                welch_segment_len: section.welch_segment_len,
                                welch_overlap: section.welch_overlap,
                                n_eval_points: section.n_eval_points,
                            },
                        },
                    });
                }
            }
        }
        points.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
u_la = 1.0
bandwidth_b = 1000.0

[quad]
r_ha = 9000.0
r_lb = 1000.0
r_la = 1000.0
r_hb = 9000.0

[cable]
length_m = 2000.0
cap_per_m = 100e-12
ind_per_m = 0.0

[grid]
sample_rate_hz = 20000.0
duration_s = 0.2
"#;

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_toml(BASE).unwrap();
        assert_eq!(cfg.quad().unwrap().r_ha, 9000.0);
        assert!((cfg.cable().unwrap().c_total() - 2e-7).abs() < 1e-18);
        let gens = cfg.generator_set().unwrap();
        assert!((gens.u_ha - 3.0).abs() < 1e-9);
    }

    #[test]
    fn session_section_roundtrip() {
        let text = format!(
            "{BASE}\n[session]\nn_bit_periods = 100\nmaster_seed = 7\n\
             bit_convention = \"lh-is-one\"\nmode = \"analytic\"\n"
        );
        let cfg = RunConfig::from_toml(&text).unwrap();
        let session = cfg.session_config().unwrap();
        assert_eq!(session.n_bit_periods, 100);
        assert_eq!(session.bit_convention, BitConvention::LhIsOne);
        assert_eq!(session.mode, SessionMode::Analytic);
        // Serialization reproduces the same config.
        let again = RunConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn attack_sweep_expands_cross_product() {
        let text = format!(
            "{BASE}\n[attack]\nattack = \"crossover\"\nchannels = \"voltage\"\n\
             n_trials = 10\nmaster_seed = 3\n\n\
             [sweep]\nbandwidths = [250.0, 62.5]\n\n\
             [[sweep.cables]]\nlength_m = 2000.0\ncap_per_m = 100e-12\nind_per_m = 0.0\n\n\
             [[sweep.cables]]\nlength_m = 1000.0\ncap_per_m = 100e-12\nind_per_m = 0.0\n"
        );
        let cfg = RunConfig::from_toml(&text).unwrap();
        let grid = cfg.attack_grid().unwrap();
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[0].key, "q0_b0_c0");
        assert_eq!(grid[3].key, "q0_b1_c1");
        assert_eq!(grid[1].config.gens.bandwidth_b, 250.0);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        assert!(RunConfig::from_toml(&format!("{BASE}\nbogus = 1\n")).is_err());
        let bad = BASE.replace("r_ha = 9000.0", "r_ha = -1.0");
        assert!(RunConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn missing_sections_reported() {
        let cfg = RunConfig::from_toml(BASE).unwrap();
        assert!(cfg.session_config().is_err());
        assert!(cfg.attack_grid().is_err());
    }
}
