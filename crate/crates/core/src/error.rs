use thiserror::Error;

/// Errors produced by the analytic and simulation layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A parameter violated a type invariant (non-positive resistance,
    /// negative RMS voltage, empty waveform, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The generator-voltage constraint system has no physical solution
    /// for this resistor quad (a squared voltage came out negative, or
    /// the system is singular).
    #[error("no physical generator solution for this resistor quad: {0}")]
    UnphysicalQuad(String),

    /// A fourth-resistor matching design is infeasible for the given
    /// three resistances.
    #[error("infeasible matching design: {0}")]
    InfeasibleMatch(String),

    /// An operation needed a finite cable crossover frequency but the
    /// cable has zero capacitance or inductance on that channel.
    #[error("degenerate cable: {0}")]
    DegenerateCable(String),

    /// Requested generator bandwidth exceeds the Nyquist frequency.
    #[error("noise bandwidth {bandwidth_hz} Hz exceeds Nyquist {nyquist_hz} Hz")]
    BandwidthExceedsNyquist { bandwidth_hz: f64, nyquist_hz: f64 },

    /// The sample rate is too low for the frequencies in play.
    #[error("sample rate {sample_rate_hz} Hz below required {required_hz} Hz (20x the highest frequency in play)")]
    SampleRateTooLow { sample_rate_hz: f64, required_hz: f64 },

    /// Welch segment longer than the waveform.
    #[error("segment of {segment_len} samples exceeds waveform length {waveform_len}")]
    SegmentTooLong { segment_len: usize, waveform_len: usize },

    /// No spectrum evaluation point was usable for crossover estimation.
    #[error("no usable spectrum points for crossover estimation")]
    NoUsablePoints,

    /// Both bit hypotheses predict identical observables on every
    /// measured channel; the eavesdropper cannot decide.
    #[error("hypotheses indistinguishable on all measured channels")]
    IndistinguishableHypotheses,

    /// Analytic wire levels are closer together than the measurement
    /// noise floor at the configured period duration; decoding would be
    /// unreliable. Increase the period duration.
    #[error("ambiguous wire levels: separation {separation} below 3x standard error {std_error}")]
    AmbiguousLevels { separation: f64, std_error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
