//! Balanced-detection observables and sensitivity estimation.
//!
//! The measurement observable is the doubly-balanced intensity difference
//! `N̂₋ = (n̂_{A,H} − n̂_{A,V}) − (n̂_{B,H} − n̂_{B,V})`, evaluated either
//! analytically from the Gaussian moments or by phase-space Monte Carlo
//! (see [`crate::montecarlo`]). For a bright probe of per-mode amplitude α
//! the mean is `4α² sin 2θ ≈ 8α² θ` and the noise variance at `θ = 0` is
//! `4α² (G − g)²` for the entangled probe versus `4α²` for a coherent one.
//!
//! Analytic statistics are exact for Gaussian states: the variance includes
//! both the carrier-scaled quadrature term and the symmetric-ordering
//! quartic term `2·Tr[(AΣ)²]`, so it matches the Monte Carlo backend to
//! sampling error at any brightness.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::mode::{channel_modes, SpatialChannel};
use crate::pipeline::ProbeConfig;

/// Step used for finite-difference slopes in θ.
pub const SLOPE_STEP: f64 = 1e-5;

/// Relative carrier mismatch above which the linearization warns.
pub const LINEARIZATION_GUARD: f64 = 0.1;

/// Which evaluation path produced a set of statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Analytic,
    MonteCarlo,
}

/// An observable of the four-mode pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// Per-channel Stokes-type difference `n̂_H − n̂_V`.
    StokesDifference(SpatialChannel),
    /// The doubly-balanced chiral observable.
    ChiralDifference,
}

impl Observable {
    /// `(mode index, sign)` pairs in canonical ordering.
    pub(crate) fn signs(&self) -> Vec<(usize, f64)> {
        match self {
            Observable::StokesDifference(ch) => {
                let (h, v) = channel_modes(*ch);
                vec![(h.canonical_index(), 1.0), (v.canonical_index(), -1.0)]
            }
            Observable::ChiralDifference => {
                vec![(0, 1.0), (1, -1.0), (2, -1.0), (3, 1.0)]
            }
        }
    }

    /// Channels rotated when differentiating with respect to θ.
    pub(crate) fn rotation_channels(&self) -> Vec<SpatialChannel> {
        match self {
            Observable::StokesDifference(ch) => vec![*ch],
            Observable::ChiralDifference => vec![SpatialChannel::A, SpatialChannel::B],
        }
    }
}

/// First and second moments of an observable, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableStats {
    /// Mean in photon-number units.
    pub mean: f64,
    /// Variance in photon-number units squared.
    pub variance: f64,
    /// dMean/dθ at the evaluated state.
    pub slope_wrt_theta: f64,
    pub backend: Backend,
    /// Sample count (0 for the analytic backend).
    pub mc_samples: u64,
    /// Standard error of the Monte Carlo mean (0 for analytic).
    pub mc_stderr: f64,
}

impl ObservableStats {
    /// Standard error of the variance estimate, `s²·√(2/(n−1))` under the
    /// bright-beam Gaussian approximation. Zero for the analytic backend.
    pub fn variance_stderr(&self) -> f64 {
        if self.mc_samples < 2 {
            return 0.0;
        }
        self.variance * (2.0 / (self.mc_samples as f64 - 1.0)).sqrt()
    }
}

/// Exact mean of the signed photon-number sum.
pub(crate) fn analytic_mean(state: &GaussianState, signs: &[(usize, f64)]) -> f64 {
    let mean = state.mean();
    let cov = state.cov();
    signs
        .iter()
        .map(|&(m, s)| {
            let (x, p) = (2 * m, 2 * m + 1);
            s * (cov[(x, x)] + cov[(p, p)] + mean[x].powi(2) + mean[p].powi(2) - 2.0) / 4.0
        })
        .sum()
}

/// Carrier-scaled (first-order) variance of the signed photon-number sum.
pub(crate) fn linearized_variance(state: &GaussianState, signs: &[(usize, f64)]) -> f64 {
    let dim = state.mean().len();
    let mut l = DVector::<f64>::zeros(dim);
    for &(m, s) in signs {
        l[2 * m] = 0.5 * s * state.mean()[2 * m];
        l[2 * m + 1] = 0.5 * s * state.mean()[2 * m + 1];
    }
    (l.transpose() * state.cov() * l)[(0, 0)]
}

/// Exact Gaussian variance: linearized term plus the symmetric-ordering
/// quartic contribution `2·Tr[(AΣ)²]`.
pub(crate) fn analytic_variance(state: &GaussianState, signs: &[(usize, f64)]) -> f64 {
    let cov = state.cov();
    let mut quartic = 0.0;
    for &(m, sm) in signs {
        for &(k, sk) in signs {
            let a = sm / 4.0;
            let b = sk / 4.0;
            for qa in [2 * m, 2 * m + 1] {
                for qb in [2 * k, 2 * k + 1] {
                    quartic += a * b * cov[(qa, qb)].powi(2);
                }
            }
        }
    }
    linearized_variance(state, signs) + 2.0 * quartic
}

fn rotate_for_observable(
    state: &GaussianState,
    observable: Observable,
    delta: f64,
) -> Result<GaussianState> {
    let mut rotated = state.clone();
    for ch in observable.rotation_channels() {
        rotated = rotated.polarization_rotate(ch, delta)?;
    }
    Ok(rotated)
}

/// Central-difference slope of the exact mean under an extra rotation.
pub(crate) fn analytic_slope(state: &GaussianState, observable: Observable) -> Result<f64> {
    let signs = observable.signs();
    let plus = rotate_for_observable(state, observable, SLOPE_STEP)?;
    let minus = rotate_for_observable(state, observable, -SLOPE_STEP)?;
    Ok((analytic_mean(&plus, &signs) - analytic_mean(&minus, &signs)) / (2.0 * SLOPE_STEP))
}

/// Linearized Stokes difference `N̂₋ ≈ α δX_{H−V}` of one spatial channel.
///
/// Means and variance keep only the carrier-scaled first-order terms, so a
/// carrier-free channel yields exactly zero. A channel with a carrier in
/// only one polarization cannot be linearized around a common amplitude and
/// is rejected; a mismatch beyond 10% logs a warning.
pub fn stokes_difference_linearized(
    state: &GaussianState,
    channel: SpatialChannel,
) -> Result<ObservableStats> {
    let (h, v) = channel_modes(channel);
    let alpha_h = state.carrier(h)?;
    let alpha_v = state.carrier(v)?;
    let (mag_h, mag_v) = (alpha_h.norm(), alpha_v.norm());

    let observable = Observable::StokesDifference(channel);
    if mag_h == 0.0 && mag_v == 0.0 {
        return Ok(ObservableStats {
            mean: 0.0,
            variance: 0.0,
            slope_wrt_theta: 0.0,
            backend: Backend::Analytic,
            mc_samples: 0,
            mc_stderr: 0.0,
        });
    }
    if mag_h == 0.0 || mag_v == 0.0 {
        return Err(Error::DegenerateLinearization(format!(
            "channel {channel:?} has a carrier in only one polarization ({mag_h:.3e} vs {mag_v:.3e})"
        )));
    }
    let mismatch = (mag_h - mag_v).abs() / mag_h.max(mag_v);
    if mismatch > LINEARIZATION_GUARD {
        log::warn!(
            "stokes linearization: carrier amplitudes differ by {:.1}% in channel {channel:?}",
            100.0 * mismatch
        );
    }

    let signs = observable.signs();
    let mean = mag_h.powi(2) - mag_v.powi(2);
    let variance = linearized_variance(state, &signs);

    // Slope of the carrier-only mean under rotation of this channel.
    let lin_mean = |s: &GaussianState| -> Result<f64> {
        Ok(s.carrier(h)?.norm_sqr() - s.carrier(v)?.norm_sqr())
    };
    let plus = state.polarization_rotate(channel, SLOPE_STEP)?;
    let minus = state.polarization_rotate(channel, -SLOPE_STEP)?;
    let slope = (lin_mean(&plus)? - lin_mean(&minus)?) / (2.0 * SLOPE_STEP);

    Ok(ObservableStats {
        mean,
        variance,
        slope_wrt_theta: slope,
        backend: Backend::Analytic,
        mc_samples: 0,
        mc_stderr: 0.0,
    })
}

/// Exact statistics of the doubly-balanced observable on a (rotated) state.
///
/// `theta` is the rotation already applied by the sample; the slope is
/// obtained by applying small extra rotations to both channels, which is
/// exact as long as losses are polarization-symmetric within each channel.
pub fn chiral_observable(state: &GaussianState, theta: f64) -> Result<ObservableStats> {
    if !state.has_standard_modes() {
        return Err(Error::invalid(
            "chiral observable needs the standard A·H, A·V, B·H, B·V modes",
        ));
    }
    if theta.abs() >= 0.1 {
        log::warn!(
            "chiral observable evaluated at θ = {theta:.3} rad, beyond the small-angle regime"
        );
    }
    let observable = Observable::ChiralDifference;
    let signs = observable.signs();
    Ok(ObservableStats {
        mean: analytic_mean(state, &signs),
        variance: analytic_variance(state, &signs),
        slope_wrt_theta: analytic_slope(state, observable)?,
        backend: Backend::Analytic,
        mc_samples: 0,
        mc_stderr: 0.0,
    })
}

/// Shot-noise-limited angular sensitivity at a given photon budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnlBaseline {
    /// δθ of the r = 0 pipeline at the same photon flux and losses.
    pub operational_rad: f64,
    /// The textbook `1/√N_t`, reported for reference.
    pub closed_form_rad: f64,
}

/// Runs the full pipeline with `r = 0` at total sample-plane flux `n_t`
/// (same per-mode losses as `probe`) and converts the balanced-detection
/// noise into an angle. The closed form `1/√N_t` is reported alongside;
/// their ratio is a fixed photon-accounting constant.
pub fn snl_delta_theta(probe: &ProbeConfig, n_t: f64) -> Result<SnlBaseline> {
    if !(n_t > 0.0) {
        return Err(Error::invalid(format!(
            "total photon number must be positive, got {n_t}"
        )));
    }
    let coherent = ProbeConfig {
        squeeze_r: 0.0,
        carrier_alpha: (n_t / 4.0).sqrt(),
        ..probe.clone()
    };
    let stats = chiral_observable(&coherent.detected_state(0.0, 1.0)?, 0.0)?;
    let delta = sensitivity_from_stats(&stats, &coherent)?;
    Ok(SnlBaseline {
        operational_rad: delta,
        closed_form_rad: 1.0 / n_t.sqrt(),
    })
}

/// Angular sensitivity and SNL comparison for one probe configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    pub delta_theta_rad: f64,
    pub snl_delta_theta_rad: f64,
    pub snl_closed_form_rad: f64,
    /// `20·log₁₀(snl_delta_theta / delta_theta)`.
    pub enhancement_db: f64,
    /// Total mean photon number at the sample plane.
    pub total_photons: f64,
    /// `G = cosh r`.
    pub gain: f64,
    /// `g = sinh r`.
    pub cross_gain: f64,
}

fn sensitivity_from_stats(stats: &ObservableStats, probe: &ProbeConfig) -> Result<f64> {
    let eta_max = probe
        .effective_eta()
        .into_iter()
        .fold(0.0_f64, f64::max);
    let scale = 8.0 * probe.carrier_alpha.powi(2) * eta_max + 1.0;
    if stats.slope_wrt_theta.abs() < 1e-9 * scale {
        return Err(Error::DegenerateSlope(format!(
            "signal slope {:.3e} is too small for error propagation",
            stats.slope_wrt_theta
        )));
    }
    Ok(stats.variance.sqrt() / stats.slope_wrt_theta.abs())
}

/// Error-propagated sensitivity `δθ = ΔN̂₋ / |∂⟨N̂₋⟩/∂θ|` with an SNL
/// baseline at matched photon flux.
pub fn sensitivity_report(probe: &ProbeConfig, sample_theta: f64) -> Result<SensitivityReport> {
    probe.validate()?;
    let stats = chiral_observable(&probe.detected_state(sample_theta, 1.0)?, sample_theta)?;
    let delta_theta = sensitivity_from_stats(&stats, probe)?;
    let n_t = probe.photons_at_sample()?;
    let snl = snl_delta_theta(probe, n_t)?;
    Ok(SensitivityReport {
        delta_theta_rad: delta_theta,
        snl_delta_theta_rad: snl.operational_rad,
        snl_closed_form_rad: snl.closed_form_rad,
        enhancement_db: 20.0 * (snl.operational_rad / delta_theta).log10(),
        total_photons: n_t,
        gain: probe.gain(),
        cross_gain: probe.cross_gain(),
    })
}
