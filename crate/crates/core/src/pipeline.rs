//! The standard four-mode probe pipeline.
//!
//! Stage 1 builds the polarization-entangled source: one parametric
//! amplifier per polarization acting across the two spatial channels, plus
//! bright carriers. Stage 2 is the sample plane, where the photon budget is
//! counted and the optical rotation acts on both channels. Stage 3 applies
//! the detection-side losses (transmission and photodiode quantum
//! efficiency) before the balanced measurement.
//!
//! Carrier convention: channel A carries a −45° carrier `(+α, −α)` and
//! channel B a +45° carrier `(+α, +α)`, i.e. the relative H/V phases are
//! locked to π and 0. The H-pair amplifier is pumped at `pump_phase` and
//! the V-pair amplifier at `pump_phase + π`, which squeezes exactly the two
//! quadrature combinations entering the balanced difference observable and
//! makes the two channels' signal contributions add to `8α² sin θ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::mode::{SpatialChannel, MODE_AH, MODE_AV, MODE_BH, MODE_BV};
use crate::symplectic::PaSpec;

/// Default per-mode optical transmission (everything between source and
/// detector except the photodiodes).
pub const DEFAULT_MODE_TRANSMISSION: f64 = 0.95;
/// Default photodiode quantum efficiency.
pub const DEFAULT_DETECTOR_QE: f64 = 0.96;
/// Default squeezing parameter (`G = 1.25`, `g = 0.75`).
pub const DEFAULT_SQUEEZE_R: f64 = std::f64::consts::LN_2;
/// Default per-mode carrier amplitude.
pub const DEFAULT_CARRIER_ALPHA: f64 = 50.0;

/// Full configuration of the entangled (or coherent, `r = 0`) probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Squeezing parameter of both parametric amplifiers.
    pub squeeze_r: f64,
    /// Pump phase of the H-pair amplifier; the V pair is pumped at
    /// `pump_phase + π`.
    pub pump_phase: f64,
    /// Per-mode carrier amplitude at the sample plane.
    pub carrier_alpha: f64,
    /// Per-mode optical transmission, canonical order `A·H, A·V, B·H, B·V`.
    pub mode_transmission: [f64; 4],
    /// Photodiode quantum efficiency, common to all modes.
    pub detector_qe: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            squeeze_r: DEFAULT_SQUEEZE_R,
            pump_phase: 0.0,
            carrier_alpha: DEFAULT_CARRIER_ALPHA,
            mode_transmission: [DEFAULT_MODE_TRANSMISSION; 4],
            detector_qe: DEFAULT_DETECTOR_QE,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.squeeze_r < 0.0 || !self.squeeze_r.is_finite() {
            return Err(Error::invalid("squeeze_r must be finite and ≥ 0"));
        }
        if !self.carrier_alpha.is_finite() || self.carrier_alpha < 0.0 {
            return Err(Error::invalid("carrier_alpha must be finite and ≥ 0"));
        }
        for (m, &eta) in self.mode_transmission.iter().enumerate() {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::invalid(format!(
                    "mode_transmission[{m}] must lie in [0, 1], got {eta}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&self.detector_qe) {
            return Err(Error::invalid("detector_qe must lie in [0, 1]"));
        }
        Ok(())
    }

    /// `G = cosh r`.
    pub fn gain(&self) -> f64 {
        self.squeeze_r.cosh()
    }

    /// `g = sinh r`.
    pub fn cross_gain(&self) -> f64 {
        self.squeeze_r.sinh()
    }

    pub fn is_squeezed(&self) -> bool {
        self.squeeze_r > 0.0
    }

    /// Effective transmissivity (optics × quantum efficiency) per mode.
    pub fn effective_eta(&self) -> [f64; 4] {
        let mut eta = self.mode_transmission;
        for e in &mut eta {
            *e *= self.detector_qe;
        }
        eta
    }

    /// Coherent reference probe: `r = 0` with the carrier amplitude raised
    /// so the photon flux at the sample plane matches exactly.
    pub fn coherent_matched(&self) -> ProbeConfig {
        let fluct_photons = self.cross_gain().powi(2);
        ProbeConfig {
            squeeze_r: 0.0,
            carrier_alpha: (self.carrier_alpha.powi(2) + fluct_photons).sqrt(),
            ..self.clone()
        }
    }

    /// Probe state at the sample plane (stage 2): two parametric amplifiers
    /// plus the ±45° carriers, before any loss.
    pub fn probe_state(&self) -> Result<GaussianState> {
        self.validate()?;
        let alpha = Complex64::new(self.carrier_alpha, 0.0);
        let mut state = GaussianState::vacuum(4)?;
        if self.is_squeezed() {
            let pa_h = PaSpec::new(self.squeeze_r, self.pump_phase, (MODE_AH, MODE_BH))?;
            let pa_v = PaSpec::new(
                self.squeeze_r,
                self.pump_phase + std::f64::consts::PI,
                (MODE_AV, MODE_BV),
            )?;
            state = state.two_mode_squeeze(&pa_h)?.two_mode_squeeze(&pa_v)?;
        }
        state = state
            .displace(MODE_AH, alpha)?
            .displace(MODE_AV, -alpha)?
            .displace(MODE_BH, alpha)?
            .displace(MODE_BV, alpha)?;
        Ok(state)
    }

    /// Total mean photon number probing the sample (stage 2).
    pub fn photons_at_sample(&self) -> Result<f64> {
        Ok(self.probe_state()?.total_photons())
    }

    /// State at the detectors after rotation by `theta` in both channels,
    /// the sample's own transmission, and the detection losses.
    pub fn detected_state(&self, theta_rad: f64, sample_transmission: f64) -> Result<GaussianState> {
        if !(sample_transmission > 0.0 && sample_transmission <= 1.0) {
            return Err(Error::invalid("sample transmission must lie in (0, 1]"));
        }
        let mut state = self
            .probe_state()?
            .polarization_rotate(SpatialChannel::A, theta_rad)?
            .polarization_rotate(SpatialChannel::B, theta_rad)?;
        let eta = self.effective_eta();
        for (m, &label) in state.labels().to_vec().iter().enumerate() {
            state = state.loss_channel(label, eta[m] * sample_transmission)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_budget_is_0912() {
        let probe = ProbeConfig::default();
        for eta in probe.effective_eta() {
            assert_relative_eq!(eta, 0.912, epsilon = 1e-12);
        }
    }

    #[test]
    fn photon_budget_counts_carriers_and_fluctuations() {
        let probe = ProbeConfig {
            carrier_alpha: 50.0,
            ..Default::default()
        };
        let expected = 4.0 * 2500.0 + 4.0 * probe.cross_gain().powi(2);
        assert_relative_eq!(probe.photons_at_sample().unwrap(), expected, epsilon = 1e-6);
    }

    #[test]
    fn coherent_matched_preserves_flux() {
        let probe = ProbeConfig::default();
        let coherent = probe.coherent_matched();
        assert_eq!(coherent.squeeze_r, 0.0);
        let n_ent = probe.photons_at_sample().unwrap();
        let n_coh = coherent.photons_at_sample().unwrap();
        assert_relative_eq!(n_ent, n_coh, max_relative = 1e-9);
    }

    #[test]
    fn carriers_form_opposite_diagonal_polarizations() {
        let probe = ProbeConfig::default();
        let state = probe.probe_state().unwrap();
        let a = probe.carrier_alpha;
        assert_relative_eq!(state.mean()[0], 2.0 * a, epsilon = 1e-12); // A·H
        assert_relative_eq!(state.mean()[2], -2.0 * a, epsilon = 1e-12); // A·V
        assert_relative_eq!(state.mean()[4], 2.0 * a, epsilon = 1e-12); // B·H
        assert_relative_eq!(state.mean()[6], 2.0 * a, epsilon = 1e-12); // B·V
    }

    #[test]
    fn detected_state_is_physical() {
        let probe = ProbeConfig::default();
        let state = probe.detected_state(0.01, 0.98).unwrap();
        state.check_physical(1e-9).unwrap();
    }
}
