use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Oversampling factor required between the sample rate and the highest
/// frequency in play (generator bandwidth or finite cable crossover).
pub const MIN_OVERSAMPLING: f64 = 20.0;

/// Uniform sampling grid for one simulated bit period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationGrid {
    pub sample_rate_hz: f64,
    pub duration_s: f64,
}

impl SimulationGrid {
    pub fn new(sample_rate_hz: f64, duration_s: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample_rate_hz must be finite and > 0, got {sample_rate_hz}"
            )));
        }
        if !(duration_s.is_finite() && duration_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "duration_s must be finite and > 0, got {duration_s}"
            )));
        }
        let grid = Self { sample_rate_hz, duration_s };
        if grid.n_samples() < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid of {} samples is too short",
                grid.n_samples()
            )));
        }
        Ok(grid)
    }

    pub fn n_samples(&self) -> usize {
        (self.sample_rate_hz * self.duration_s).round() as usize
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.sample_rate_hz / 2.0
    }

    /// Enforce the sampling rule: the rate must be at least
    /// [`MIN_OVERSAMPLING`] times every finite frequency in play.
    pub fn check_oversampling(&self, frequencies_in_play: &[f64]) -> Result<()> {
        let highest = frequencies_in_play
            .iter()
            .copied()
            .filter(|f| f.is_finite())
            .fold(0.0_f64, f64::max);
        let required = MIN_OVERSAMPLING * highest;
        if self.sample_rate_hz < required {
            return Err(Error::SampleRateTooLow {
                sample_rate_hz: self.sample_rate_hz,
                required_hz: required,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_count_rounds() {
        let grid = SimulationGrid::new(1000.0, 0.5).unwrap();
        assert_eq!(grid.n_samples(), 500);
        assert_eq!(grid.nyquist_hz(), 500.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(SimulationGrid::new(0.0, 1.0).is_err());
        assert!(SimulationGrid::new(1000.0, 0.0).is_err());
        assert!(SimulationGrid::new(10.0, 0.1).is_err());
    }

    #[test]
    fn oversampling_rule() {
        let grid = SimulationGrid::new(20_000.0, 1.0).unwrap();
        assert!(grid.check_oversampling(&[1000.0, 884.0]).is_ok());
        assert!(grid.check_oversampling(&[1000.0, f64::INFINITY]).is_ok());
        let err = grid.check_oversampling(&[1500.0]).unwrap_err();
        assert!(matches!(err, Error::SampleRateTooLow { .. }));
    }
}
