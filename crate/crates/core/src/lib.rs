//! Analytic design library and Monte-Carlo simulator for resistor-pair
//! thermal-noise key exchange over a cable with parasitic capacitance
//! and inductance.
//!
//! The crate is organized in four layers:
//!
//! - [`circuit`]: closed-form physics — wire levels, generator-voltage
//!   solutions, fourth-resistor design rules, Lorentzian cable spectra,
//!   crossover frequencies and bit noise-temperatures.
//! - [`noise`]: time-domain synthesis of band-limited Gaussian generator
//!   noise, first-order cable filtering, and Welch spectral estimation.
//! - [`attacks`]: the eavesdropper's passive single-point measurements —
//!   crossover-frequency estimation and noise-temperature discrimination
//!   — plus leak statistics with confidence intervals.
//! - [`protocol`]: the per-bit key-exchange session state machine with
//!   ground-truth bookkeeping for the attack harness.
//!
//! [`reference`] carries published reference tables used by the
//! regeneration command and the acceptance suite; [`config`] is the
//! declarative run-configuration schema shared with the CLI.

pub mod attacks;
pub mod circuit;
pub mod config;
pub mod reference;
pub mod error;
pub mod noise;
pub mod protocol;
pub mod seeds;

pub use error::{Error, Result};
