//! Command-line front end for the key-exchange design library and
//! simulator.

mod commands;
mod config_input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kljn_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad input: unparsable config, invalid flags, IO problems.
    Message(String),
    Core(CoreError),
}

impl CliError {
    fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Message(format!("{}: {err}", path.display()))
    }

    /// Exit codes: 1 bad input, 2 infeasible design, 3 statistical guard.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Message(_) => 1,
            CliError::Core(e) => match e {
                CoreError::InfeasibleMatch(_) | CoreError::UnphysicalQuad(_) => 2,
                CoreError::AmbiguousLevels { .. } => 3,
                _ => 1,
            },
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Message(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kljn",
    version,
    about = "Design calculators, reference tables, session simulation and \
             passive-attack campaigns for resistor-pair thermal-noise key exchange"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the fourth resistor for a design rule and emit the full report.
    Design(DesignArgs),
    /// Regenerate the embedded reference tables, flagging deviations over 1%.
    Tables(TablesArgs),
    /// Emit the full analytic report for a configured instance.
    Report(ReportArgs),
    /// Run a key-exchange session (analytic or Monte-Carlo).
    Simulate(SimulateArgs),
    /// Run a passive-attack campaign over the configured grid.
    Attack(AttackArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignMode {
    /// Fourth resistor from the zero-power condition.
    ZeroPower,
    /// Fourth resistor equalizing the parallel resultants.
    MatchParallel,
    /// Fourth resistor equalizing the serial resultants.
    MatchSerial,
}

#[derive(Args)]
pub struct DesignArgs {
    #[arg(long, value_enum)]
    pub mode: DesignMode,
    #[arg(long)]
    pub r_ha: Option<f64>,
    #[arg(long)]
    pub r_lb: Option<f64>,
    #[arg(long)]
    pub r_la: Option<f64>,
    #[arg(long)]
    pub r_hb: Option<f64>,
    /// Low-A generator RMS voltage for the report, volts.
    #[arg(long, default_value_t = 1.0)]
    pub u_la: f64,
    /// Noise bandwidth for the report, hertz.
    #[arg(long, default_value_t = 1000.0)]
    pub bandwidth_b: f64,
    /// Cable length for the crossover rows, meters.
    #[arg(long, default_value_t = 2000.0)]
    pub cable_length_m: f64,
    /// Cable capacitance, farads per meter.
    #[arg(long, default_value_t = 100e-12)]
    pub cable_cap_per_m: f64,
    /// Cable inductance, henries per meter.
    #[arg(long, default_value_t = 0.7e-6)]
    pub cable_ind_per_m: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Dump the first N periods' waveforms as binary + JSON sidecar.
    #[arg(long, default_value_t = 0)]
    pub dump_waveforms: usize,
    /// Export the Welch PSD of the first period's wire voltage as CSV.
    #[arg(long)]
    pub dump_psd: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct AttackArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args)]
pub struct ConfigArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config value by dotted path, e.g.
    /// `--set session.master_seed=7` or `--set quad.r_ha=12000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Args)]
pub struct OutArgs {
    /// Output directory (default: $KLJN_OUT_DIR or ./kljn-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for single-report commands.
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn csv(&self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }
    pub fn json(&self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            // Help and version are not errors.
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    let result = match cli.command {
        Command::Design(args) => commands::design::run(args),
        Command::Tables(args) => commands::tables::run(args),
        Command::Report(args) => commands::report::run(args),
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Attack(args) => commands::attack::run(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
