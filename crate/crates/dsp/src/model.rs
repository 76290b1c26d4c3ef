//! Phenomenological noise-power model of the detection chain.
//!
//! All levels are variance ratios relative to the shot-noise limit of the
//! coherent probe at the same flux (SNL = 1, i.e. 0 dB). The squeezed floor
//! approaches the SNL beyond the squeezing bandwidth (Lorentzian), technical
//! noise rises as 1/f below a corner frequency, and the pump laser
//! contributes a narrow spike. Contributions combine by `max`, so the
//! quoted floor is read directly between the structured bands.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseModel {
    /// Broadband squeezing level in dB (≤ 0) used when no probe context
    /// supplies a floor.
    pub squeeze_floor_db: f64,
    /// Lorentzian half-width of the squeezing spectrum in Hz.
    pub squeeze_bandwidth_hz: f64,
    /// Corner below which technical noise rises as 1/f.
    pub lowfreq_corner_hz: f64,
    /// Pump-noise spike center frequency.
    pub pump_spike_hz: f64,
    /// Gaussian width (σ) of the pump spike.
    pub pump_spike_width_hz: f64,
    /// Spike height above the local background, in dB.
    pub pump_spike_height_db: f64,
    /// Electronic noise floor in dB relative to the SNL.
    pub electronic_floor_db: f64,
    /// Balanced-detector bandwidth (4th-order Butterworth rolloff).
    pub detector_bandwidth_hz: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            squeeze_floor_db: -6.02,
            // Four-wave-mixing squeezing is broadband on the scale of the
            // detector; a narrower value would contradict the simultaneous
            // 0.7 MHz floor and 1.5 MHz SNR calibration points.
            squeeze_bandwidth_hz: 20.0e6,
            lowfreq_corner_hz: 300.0e3,
            pump_spike_hz: 1.0e6,
            pump_spike_width_hz: 30.0e3,
            pump_spike_height_db: 8.0,
            electronic_floor_db: -20.0,
            detector_bandwidth_hz: 4.0e6,
        }
    }
}

impl NoiseModel {
    /// A structureless model: flat SNL backbone, no spike, no technical
    /// rise, negligible electronics. Used for estimator calibration.
    pub fn flat() -> Self {
        NoiseModel {
            squeeze_floor_db: 0.0,
            lowfreq_corner_hz: 1e-6,
            pump_spike_height_db: -300.0,
            electronic_floor_db: -300.0,
            detector_bandwidth_hz: 1e12,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.squeeze_floor_db > 0.0 {
            return Err(Error::invalid("squeeze_floor_db must be ≤ 0"));
        }
        for (name, v) in [
            ("squeeze_bandwidth_hz", self.squeeze_bandwidth_hz),
            ("lowfreq_corner_hz", self.lowfreq_corner_hz),
            ("pump_spike_hz", self.pump_spike_hz),
            ("pump_spike_width_hz", self.pump_spike_width_hz),
            ("detector_bandwidth_hz", self.detector_bandwidth_hz),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn electronic_linear(&self) -> f64 {
        10f64.powf(self.electronic_floor_db / 10.0)
    }

    /// Optical noise ratio with an explicit broadband floor (linear, ≤ 1).
    ///
    /// `floor(f) = 1 − (1 − s_min)/(1 + (f/f_bw)²)`, multiplied below the
    /// corner by the 1/f technical term, with the pump spike max-combined.
    pub fn shaped_optical_psd(&self, freq_hz: f64, floor_linear: f64) -> f64 {
        let lorentz = |f: f64| -> f64 {
            1.0 - (1.0 - floor_linear) / (1.0 + (f / self.squeeze_bandwidth_hz).powi(2))
        };
        let backbone = |f: f64| -> f64 { lorentz(f) * (self.lowfreq_corner_hz / f).max(1.0) };
        let spike_base = backbone(self.pump_spike_hz)
            * 10f64.powf(self.pump_spike_height_db / 10.0);
        let spike = spike_base
            * (-(freq_hz - self.pump_spike_hz).powi(2)
                / (2.0 * self.pump_spike_width_hz.powi(2)))
            .exp();
        backbone(freq_hz).max(spike)
    }

    /// Noise ratio at the model's own configured squeezing floor.
    pub fn squeezing_psd(&self, freq_hz: f64) -> Result<f64> {
        if !(freq_hz > 0.0) || !freq_hz.is_finite() {
            return Err(Error::invalid(format!(
                "frequency must be positive, got {freq_hz}"
            )));
        }
        self.validate()?;
        let floor = 10f64.powf(self.squeeze_floor_db / 10.0);
        Ok(self.shaped_optical_psd(freq_hz, floor))
    }

    /// Power response of the detector (4th-order Butterworth).
    pub fn detector_response(&self, freq_hz: f64) -> f64 {
        1.0 / (1.0 + (freq_hz / self.detector_bandwidth_hz).powi(8))
    }

    /// Full synthesis target: optical noise at `floor_linear` through the
    /// detector, plus the electronic floor.
    pub fn total_psd(&self, freq_hz: f64, floor_linear: f64) -> f64 {
        self.shaped_optical_psd(freq_hz, floor_linear) * self.detector_response(freq_hz)
            + self.electronic_linear()
    }
}
