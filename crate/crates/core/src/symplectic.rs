//! Symplectic phase-space transformations.
//!
//! Quadratures are ordered `(X_0, P_0, X_1, P_1, …)` with the convention
//! `X = a† + a`, `P = i(a† − a)`, so the vacuum has unit variance in every
//! quadrature. A lossless Gaussian optical element acts as `v → S v + d`
//! where `S` preserves the symplectic form `Ω` (`S Ω Sᵀ = Ω`).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mode::ModeLabel;

/// Tolerance on `‖SΩSᵀ − Ω‖∞` for constructed operations.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The standard symplectic form for `modes` optical modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let dim = 2 * modes;
    let mut omega = DMatrix::zeros(dim, dim);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

/// A linear phase-space transformation with an optional displacement.
#[derive(Debug, Clone)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticOp {
    /// Identity on `modes` modes.
    pub fn identity(modes: usize) -> Self {
        let dim = 2 * modes;
        SymplecticOp {
            matrix: DMatrix::identity(dim, dim),
            displacement: DVector::zeros(dim),
        }
    }

    /// Builds an operation from an explicit matrix and displacement,
    /// rejecting non-symplectic matrices.
    pub fn from_parts(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "symplectic matrix must be square with even dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if displacement.len() != matrix.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "displacement length {} does not match matrix dimension {}",
                displacement.len(),
                matrix.nrows()
            )));
        }
        let op = SymplecticOp {
            matrix,
            displacement,
        };
        let defect = op.symplectic_defect();
        if defect > SYMPLECTIC_TOL {
            return Err(Error::InvalidArgument(format!(
                "matrix is not symplectic: ‖SΩSᵀ − Ω‖∞ = {defect:.3e}"
            )));
        }
        Ok(op)
    }

    pub fn mode_count(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    /// `‖SΩSᵀ − Ω‖∞`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.mode_count());
        let residual = &self.matrix * &omega * self.matrix.transpose() - omega;
        residual.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    /// Two-mode squeezer `a → G a + g e^{iφ} b†`, `b → G b + g e^{iφ} a†`
    /// with `G = cosh r`, `g = sinh r`, acting on the mode pair `(i, j)`.
    ///
    /// With `φ = 0` the difference quadrature `X_i − X_j` is squeezed by
    /// `e^{−r}`; `φ = π` squeezes the sum instead.
    pub fn two_mode_squeezer(
        modes: usize,
        pair: (usize, usize),
        r: f64,
        pump_phase: f64,
    ) -> Result<Self> {
        let (i, j) = pair;
        check_mode_index(modes, i)?;
        check_mode_index(modes, j)?;
        if i == j {
            return Err(Error::invalid("two-mode squeezer needs distinct modes"));
        }
        if r < 0.0 {
            return Err(Error::invalid(
                "squeezing parameter r must be ≥ 0; shift pump_phase by π to flip the quadrature",
            ));
        }
        if !r.is_finite() || !pump_phase.is_finite() {
            return Err(Error::invalid("squeezer parameters must be finite"));
        }
        let big_g = r.cosh();
        let small_g = r.sinh();
        let (sin_phi, cos_phi) = pump_phase.sin_cos();

        let mut op = SymplecticOp::identity(modes);
        let (xi, pi_) = (2 * i, 2 * i + 1);
        let (xj, pj) = (2 * j, 2 * j + 1);
        for &(row, col) in &[(xi, xi), (pi_, pi_), (xj, xj), (pj, pj)] {
            op.matrix[(row, col)] = big_g;
        }
        // Conjugate coupling: X picks up (cosφ X' + sinφ P'), P picks up
        // (sinφ X' − cosφ P') from the partner mode.
        for &(a, b) in &[(i, j), (j, i)] {
            let (xa, pa) = (2 * a, 2 * a + 1);
            let (xb, pb) = (2 * b, 2 * b + 1);
            op.matrix[(xa, xb)] = small_g * cos_phi;
            op.matrix[(xa, pb)] = small_g * sin_phi;
            op.matrix[(pa, xb)] = small_g * sin_phi;
            op.matrix[(pa, pb)] = -small_g * cos_phi;
        }
        debug_assert!(op.symplectic_defect() < SYMPLECTIC_TOL);
        Ok(op)
    }

    /// Beam splitter `a → √t a + √(1−t) e^{iφ} b`, `b → √t b − √(1−t) e^{−iφ} a`.
    pub fn beam_splitter(
        modes: usize,
        mode_i: usize,
        mode_j: usize,
        transmissivity: f64,
        phase: f64,
    ) -> Result<Self> {
        check_mode_index(modes, mode_i)?;
        check_mode_index(modes, mode_j)?;
        if mode_i == mode_j {
            return Err(Error::invalid("beam splitter needs distinct modes"));
        }
        if !(0.0..=1.0).contains(&transmissivity) {
            return Err(Error::invalid(format!(
                "transmissivity must lie in [0, 1], got {transmissivity}"
            )));
        }
        let t = transmissivity.sqrt();
        let k = (1.0 - transmissivity).sqrt();
        let (sin_phi, cos_phi) = phase.sin_cos();

        let mut op = SymplecticOp::identity(modes);
        let (xi, pi_) = (2 * mode_i, 2 * mode_i + 1);
        let (xj, pj) = (2 * mode_j, 2 * mode_j + 1);
        for &d in &[xi, pi_, xj, pj] {
            op.matrix[(d, d)] = t;
        }
        // e^{iφ} b into mode i.
        op.matrix[(xi, xj)] = k * cos_phi;
        op.matrix[(xi, pj)] = -k * sin_phi;
        op.matrix[(pi_, xj)] = k * sin_phi;
        op.matrix[(pi_, pj)] = k * cos_phi;
        // −e^{−iφ} a into mode j.
        op.matrix[(xj, xi)] = -k * cos_phi;
        op.matrix[(xj, pi_)] = -k * sin_phi;
        op.matrix[(pj, xi)] = k * sin_phi;
        op.matrix[(pj, pi_)] = -k * cos_phi;
        debug_assert!(op.symplectic_defect() < SYMPLECTIC_TOL);
        Ok(op)
    }

    /// SO(2) Jones rotation `(H, V) → (H cosθ − V sinθ, H sinθ + V cosθ)`
    /// applied identically to the X and P quadratures of the pair.
    pub fn jones_rotator(modes: usize, h_mode: usize, v_mode: usize, theta: f64) -> Result<Self> {
        check_mode_index(modes, h_mode)?;
        check_mode_index(modes, v_mode)?;
        if h_mode == v_mode {
            return Err(Error::invalid("polarization rotation needs distinct modes"));
        }
        let (sin_t, cos_t) = theta.sin_cos();
        let mut op = SymplecticOp::identity(modes);
        for q in 0..2 {
            let h = 2 * h_mode + q;
            let v = 2 * v_mode + q;
            op.matrix[(h, h)] = cos_t;
            op.matrix[(h, v)] = -sin_t;
            op.matrix[(v, h)] = sin_t;
            op.matrix[(v, v)] = cos_t;
        }
        debug_assert!(op.symplectic_defect() < SYMPLECTIC_TOL);
        Ok(op)
    }

    /// Phase-space rotation by `phi` in one mode's `(X, P)` plane
    /// (`a → e^{iφ} a`).
    pub fn phase_shifter(modes: usize, mode: usize, phi: f64) -> Result<Self> {
        check_mode_index(modes, mode)?;
        let (sin_p, cos_p) = phi.sin_cos();
        let mut op = SymplecticOp::identity(modes);
        let (x, p) = (2 * mode, 2 * mode + 1);
        op.matrix[(x, x)] = cos_p;
        op.matrix[(x, p)] = -sin_p;
        op.matrix[(p, x)] = sin_p;
        op.matrix[(p, p)] = cos_p;
        Ok(op)
    }

    /// The operation applying `self` first and `later` second.
    pub fn then(&self, later: &SymplecticOp) -> Result<SymplecticOp> {
        if self.mode_count() != later.mode_count() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose ops on {} and {} modes",
                self.mode_count(),
                later.mode_count()
            )));
        }
        Ok(SymplecticOp {
            matrix: &later.matrix * &self.matrix,
            displacement: &later.matrix * &self.displacement + &later.displacement,
        })
    }
}

/// Composes operations in application order (first element acts first).
/// An empty list yields the identity.
pub fn compose(modes: usize, ops: &[SymplecticOp]) -> Result<SymplecticOp> {
    let mut acc = SymplecticOp::identity(modes);
    for op in ops {
        acc = acc.then(op)?;
    }
    Ok(acc)
}

fn check_mode_index(modes: usize, index: usize) -> Result<()> {
    if index >= modes {
        return Err(Error::invalid(format!(
            "mode index {index} out of range for {modes} modes"
        )));
    }
    Ok(())
}

/// Parameters of one parametric amplifier acting on a mode pair.
#[derive(Debug, Clone)]
pub struct PaSpec {
    pub r: f64,
    pub pump_phase: f64,
    pub target_pair: (ModeLabel, ModeLabel),
}

impl PaSpec {
    pub fn new(r: f64, pump_phase: f64, target_pair: (ModeLabel, ModeLabel)) -> Result<Self> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::invalid(format!(
                "squeezing parameter must be finite and ≥ 0, got {r}"
            )));
        }
        if target_pair.0 == target_pair.1 {
            return Err(Error::invalid("PA target modes must be distinct"));
        }
        Ok(PaSpec {
            r,
            pump_phase,
            target_pair,
        })
    }

    /// `G = cosh r`.
    pub fn gain(&self) -> f64 {
        self.r.cosh()
    }

    /// `g = sinh r`.
    pub fn cross_gain(&self) -> f64 {
        self.r.sinh()
    }
}
