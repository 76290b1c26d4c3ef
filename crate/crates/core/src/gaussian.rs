//! Multimode Gaussian states in the covariance-matrix representation.
//!
//! A state is fully described by its mean quadrature vector and covariance
//! matrix. With `X = a† + a` the vacuum covariance is the identity, a
//! coherent state of amplitude `α` has mean `(2 Re α, 2 Im α)` in its mode,
//! and the mean photon number per mode is
//! `(Var X + Var P + ⟨X⟩² + ⟨P⟩² − 2) / 4`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mode::{channel_modes, ModeLabel, SpatialChannel, STANDARD_MODES};
use crate::symplectic::{symplectic_form, PaSpec, SymplecticOp};

/// Relative tolerance for covariance symmetry at construction.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack on the uncertainty bound: symplectic eigenvalues must be ≥ 1 − this.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
    labels: Vec<ModeLabel>,
}

impl GaussianState {
    /// Vacuum on `modes` modes with labels assigned in canonical order.
    /// Only the four standard pipeline labels exist, so `modes ∈ 1..=4`.
    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::invalid("mode count must be ≥ 1"));
        }
        if modes > STANDARD_MODES.len() {
            return Err(Error::invalid(format!(
                "at most {} labeled modes exist, got {modes}",
                STANDARD_MODES.len()
            )));
        }
        let dim = 2 * modes;
        Ok(GaussianState {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim),
            labels: STANDARD_MODES[..modes].to_vec(),
        })
    }

    /// Builds a state from explicit moments, validating symmetry and the
    /// uncertainty bound.
    pub fn from_parts(
        mean: DVector<f64>,
        cov: DMatrix<f64>,
        labels: Vec<ModeLabel>,
    ) -> Result<Self> {
        let dim = 2 * labels.len();
        if labels.is_empty() {
            return Err(Error::invalid("state needs at least one mode"));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::invalid(format!("duplicate mode label {a}")));
            }
        }
        if mean.len() != dim || cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected mean length {dim} and {dim}x{dim} covariance"
            )));
        }
        let scale = cov.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (cov[(i, j)] - cov[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::invalid(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut sym = cov.clone();
        for i in 0..dim {
            for j in 0..dim {
                sym[(i, j)] = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            }
        }
        let state = GaussianState {
            mean,
            cov: sym,
            labels,
        };
        state.check_physical(PHYSICALITY_TOL)?;
        Ok(state)
    }

    pub fn mode_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index_of(&self, mode: ModeLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == mode)
            .ok_or_else(|| Error::invalid(format!("unknown mode {mode}")))
    }

    /// Whether the state carries the full standard `A·H, A·V, B·H, B·V` set.
    pub fn has_standard_modes(&self) -> bool {
        self.labels.len() == 4 && self.labels == STANDARD_MODES
    }

    /// Complex carrier amplitude `ᾱ = (⟨X⟩ + i⟨P⟩) / 2` of one mode.
    pub fn carrier(&self, mode: ModeLabel) -> Result<Complex64> {
        let m = self.index_of(mode)?;
        Ok(Complex64::new(self.mean[2 * m], self.mean[2 * m + 1]) * 0.5)
    }

    /// Displaces one mode by a complex amplitude; covariance is unchanged.
    pub fn displace(&self, mode: ModeLabel, amplitude: Complex64) -> Result<Self> {
        let m = self.index_of(mode)?;
        let mut out = self.clone();
        out.mean[2 * m] += 2.0 * amplitude.re;
        out.mean[2 * m + 1] += 2.0 * amplitude.im;
        Ok(out)
    }

    /// Applies a symplectic operation: `μ → Sμ + d`, `Σ → SΣSᵀ`.
    pub fn apply(&self, op: &SymplecticOp) -> Result<Self> {
        if op.mode_count() != self.mode_count() {
            return Err(Error::DimensionMismatch(format!(
                "operation on {} modes applied to {}-mode state",
                op.mode_count(),
                self.mode_count()
            )));
        }
        let s = op.matrix();
        Ok(GaussianState {
            mean: s * &self.mean + op.displacement(),
            cov: s * &self.cov * s.transpose(),
            labels: self.labels.clone(),
        })
    }

    /// Pure-loss channel: the mode is mixed with vacuum at transmissivity
    /// `eta`. Means scale by `√η`, the mode's covariance block relaxes
    /// toward the identity and cross-covariances scale by `√η`.
    pub fn loss_channel(&self, mode: ModeLabel, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::invalid(format!(
                "transmissivity must lie in [0, 1], got {eta}"
            )));
        }
        let m = self.index_of(mode)?;
        let root = eta.sqrt();
        let mut out = self.clone();
        out.mean[2 * m] *= root;
        out.mean[2 * m + 1] *= root;
        let dim = 2 * self.mode_count();
        for q in [2 * m, 2 * m + 1] {
            for k in 0..dim {
                if k == 2 * m || k == 2 * m + 1 {
                    continue;
                }
                out.cov[(q, k)] *= root;
                out.cov[(k, q)] *= root;
            }
        }
        for qa in [2 * m, 2 * m + 1] {
            for qb in [2 * m, 2 * m + 1] {
                out.cov[(qa, qb)] *= eta;
            }
            out.cov[(qa, qa)] += 1.0 - eta;
        }
        Ok(out)
    }

    /// Applies `loss_channel` with the same transmissivity to every mode.
    pub fn uniform_loss(&self, eta: f64) -> Result<Self> {
        let mut out = self.clone();
        for &label in &self.labels.clone() {
            out = out.loss_channel(label, eta)?;
        }
        Ok(out)
    }

    pub fn two_mode_squeeze(&self, spec: &PaSpec) -> Result<Self> {
        let i = self.index_of(spec.target_pair.0)?;
        let j = self.index_of(spec.target_pair.1)?;
        let op =
            SymplecticOp::two_mode_squeezer(self.mode_count(), (i, j), spec.r, spec.pump_phase)?;
        self.apply(&op)
    }

    pub fn beam_splitter(
        &self,
        mode_i: ModeLabel,
        mode_j: ModeLabel,
        transmissivity: f64,
        phase: f64,
    ) -> Result<Self> {
        let i = self.index_of(mode_i)?;
        let j = self.index_of(mode_j)?;
        let op = SymplecticOp::beam_splitter(self.mode_count(), i, j, transmissivity, phase)?;
        self.apply(&op)
    }

    /// Optical rotation of one spatial channel's `(H, V)` pair.
    /// Positive `theta` is the rotation produced by an L-enantiomer.
    pub fn polarization_rotate(&self, channel: SpatialChannel, theta: f64) -> Result<Self> {
        let (h, v) = channel_modes(channel);
        let hi = self.index_of(h)?;
        let vi = self.index_of(v)?;
        let op = SymplecticOp::jones_rotator(self.mode_count(), hi, vi, theta)?;
        self.apply(&op)
    }

    pub fn phase_shift(&self, mode: ModeLabel, phi: f64) -> Result<Self> {
        let m = self.index_of(mode)?;
        let op = SymplecticOp::phase_shifter(self.mode_count(), m, phi)?;
        self.apply(&op)
    }

    /// Mean photon number of one mode.
    pub fn mode_photons(&self, mode: ModeLabel) -> Result<f64> {
        let m = self.index_of(mode)?;
        let (x, p) = (2 * m, 2 * m + 1);
        Ok(
            (self.cov[(x, x)] + self.cov[(p, p)] + self.mean[x].powi(2) + self.mean[p].powi(2)
                - 2.0)
                / 4.0,
        )
    }

    /// Total mean photon number over all modes.
    pub fn total_photons(&self) -> f64 {
        self.labels
            .iter()
            .map(|&l| self.mode_photons(l).expect("own label"))
            .sum()
    }

    /// Symplectic eigenvalues of the covariance matrix, ascending.
    /// Physical states satisfy `ν_k ≥ 1`.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let omega = symplectic_form(self.mode_count());
        let m = omega * &self.cov;
        let eigen = m.complex_eigenvalues();
        let mut magnitudes: Vec<f64> = eigen.iter().map(|l| l.norm()).collect();
        magnitudes.sort_by(|a, b| a.total_cmp(b));
        // Eigenvalues of ΩΣ come in ±iν pairs; keep one of each.
        magnitudes.into_iter().step_by(2).collect()
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Validates the uncertainty bound `ν_min ≥ 1 − tol`.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let nu_min = self.min_symplectic_eigenvalue();
        if nu_min < 1.0 - tol {
            return Err(Error::NonPhysical(format!(
                "minimum symplectic eigenvalue {nu_min} violates the uncertainty bound"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{MODE_AH, MODE_AV, MODE_BH};
    use approx::assert_relative_eq;

    const LN_2: f64 = std::f64::consts::LN_2;

    #[test]
    fn vacuum_is_identity_with_zero_mean() {
        let vac = GaussianState::vacuum(4).unwrap();
        assert_eq!(vac.mean(), &DVector::zeros(8));
        assert_eq!(vac.cov(), &DMatrix::identity(8, 8));
        assert_eq!(vac.total_photons(), 0.0);
    }

    #[test]
    fn vacuum_saturates_uncertainty() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert_relative_eq!(vac.min_symplectic_eigenvalue(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn vacuum_rejects_bad_mode_counts() {
        assert!(GaussianState::vacuum(0).is_err());
        assert!(GaussianState::vacuum(5).is_err());
    }

    #[test]
    fn displacement_sets_mean_and_photons() {
        let vac = GaussianState::vacuum(4).unwrap();
        let state = vac.displace(MODE_AH, Complex64::new(3.0, 0.0)).unwrap();
        assert_relative_eq!(state.mean()[0], 6.0, epsilon = 1e-12);
        assert_relative_eq!(state.mode_photons(MODE_AH).unwrap(), 9.0, epsilon = 1e-12);
        assert_eq!(state.cov(), vac.cov());
    }

    #[test]
    fn displacement_inverse_restores_state() {
        let vac = GaussianState::vacuum(2).unwrap();
        let alpha = Complex64::new(1.7, -0.4);
        let there = vac.displace(MODE_AV, alpha).unwrap();
        let back = there.displace(MODE_AV, -alpha).unwrap();
        for i in 0..4 {
            assert_relative_eq!(back.mean()[i], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn displacement_of_unknown_mode_fails() {
        let vac = GaussianState::vacuum(2).unwrap();
        assert!(vac.displace(MODE_BH, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn zero_displacement_is_identity() {
        let vac = GaussianState::vacuum(1).unwrap();
        let same = vac.displace(MODE_AH, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(same.mean(), vac.mean());
    }

    #[test]
    fn two_mode_squeeze_matches_hand_computed_variances() {
        // r = ln 2: G = 1.25, g = 0.75 on vacuum.
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(LN_2, 0.0, (MODE_AH, MODE_BH)).unwrap();
        let state = vac.two_mode_squeeze(&spec).unwrap();
        let c = state.cov();
        assert_relative_eq!(c[(0, 0)], 2.125, epsilon = 1e-12);
        assert_relative_eq!(c[(0, 4)], 1.875, epsilon = 1e-12);
        let var_diff = c[(0, 0)] + c[(4, 4)] - 2.0 * c[(0, 4)];
        assert_relative_eq!(var_diff, 0.5, epsilon = 1e-12);
        // Ratio to two-mode vacuum (variance 2) is −6.02 dB.
        let db = 10.0 * (var_diff / 2.0).log10();
        assert_relative_eq!(db, -6.0206, epsilon = 1e-3);
    }

    #[test]
    fn squeeze_r_zero_is_identity() {
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(0.0, 0.0, (MODE_AH, MODE_BH)).unwrap();
        let state = vac.two_mode_squeeze(&spec).unwrap();
        assert_eq!(state.cov(), vac.cov());
    }

    #[test]
    fn loss_limits() {
        let vac = GaussianState::vacuum(2).unwrap();
        let spec = PaSpec::new(0.9, 0.0, (MODE_AH, MODE_AV)).unwrap();
        let squeezed = vac.two_mode_squeeze(&spec).unwrap();

        let untouched = squeezed.loss_channel(MODE_AH, 1.0).unwrap();
        assert_relative_eq!(untouched.cov(), squeezed.cov(), epsilon = 1e-12);

        let reset = squeezed.loss_channel(MODE_AH, 0.0).unwrap();
        assert_relative_eq!(reset.cov()[(0, 0)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(reset.cov()[(1, 1)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(reset.cov()[(0, 2)], 0.0, epsilon = 1e-12);

        assert!(squeezed.loss_channel(MODE_AH, 1.5).is_err());
    }

    #[test]
    fn loss_budget_funnels_six_db_to_five() {
        // −6.02 dB squeezed difference variance through uniform η = 0.912.
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(LN_2, 0.0, (MODE_AH, MODE_BH)).unwrap();
        let state = vac.two_mode_squeeze(&spec).unwrap().uniform_loss(0.912).unwrap();
        let c = state.cov();
        let var_diff = (c[(0, 0)] + c[(4, 4)] - 2.0 * c[(0, 4)]) / 2.0;
        assert_relative_eq!(var_diff, 0.912 * 0.25 + 0.088, epsilon = 1e-12);
        let db = 10.0 * var_diff.log10();
        assert!((db + 5.0).abs() < 0.05, "got {db} dB");
    }

    #[test]
    fn phase_shift_flips_coherent_amplitude() {
        let state = GaussianState::vacuum(1)
            .unwrap()
            .displace(MODE_AH, Complex64::new(2.0, 0.5))
            .unwrap();
        let flipped = state.phase_shift(MODE_AH, std::f64::consts::PI).unwrap();
        assert_relative_eq!(flipped.mean()[0], -state.mean()[0], epsilon = 1e-12);
        assert_relative_eq!(flipped.mean()[1], -state.mean()[1], epsilon = 1e-12);

        let full_turn = state
            .phase_shift(MODE_AH, 2.0 * std::f64::consts::PI)
            .unwrap();
        assert_relative_eq!(full_turn.mean()[0], state.mean()[0], epsilon = 1e-12);
    }

    #[test]
    fn rotation_moves_h_into_v() {
        let state = GaussianState::vacuum(4)
            .unwrap()
            .displace(MODE_AH, Complex64::new(3.0, 0.0))
            .unwrap();
        let rotated = state
            .polarization_rotate(SpatialChannel::A, std::f64::consts::FRAC_PI_2)
            .unwrap();
        assert_relative_eq!(rotated.mode_photons(MODE_AH).unwrap(), 0.0, epsilon = 1e-10);
        assert_relative_eq!(rotated.mode_photons(MODE_AV).unwrap(), 9.0, epsilon = 1e-10);
    }

    #[test]
    fn beam_splitter_half_splits_energy() {
        let state = GaussianState::vacuum(2)
            .unwrap()
            .displace(MODE_AH, Complex64::new(4.0, 0.0))
            .unwrap();
        let split = state.beam_splitter(MODE_AH, MODE_AV, 0.5, 0.0).unwrap();
        assert_relative_eq!(split.mode_photons(MODE_AH).unwrap(), 8.0, epsilon = 1e-10);
        assert_relative_eq!(split.mode_photons(MODE_AV).unwrap(), 8.0, epsilon = 1e-10);
    }

    #[test]
    fn from_parts_rejects_asymmetric_and_unphysical() {
        let mut cov = DMatrix::<f64>::identity(2, 2);
        cov[(0, 1)] = 0.5;
        assert!(GaussianState::from_parts(DVector::zeros(2), cov, vec![MODE_AH]).is_err());

        let tight = DMatrix::<f64>::from_diagonal_element(2, 2, 0.5);
        assert!(matches!(
            GaussianState::from_parts(DVector::zeros(2), tight, vec![MODE_AH]),
            Err(Error::NonPhysical(_))
        ));
    }
}
