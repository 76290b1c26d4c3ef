//! Chiral sample chemistry: enantiomer concentrations to optical rotation.
//!
//! Rotation follows Biot's law, `θ[deg] = [α] · (c_L − c_D) · L`, with the
//! specific rotation `[α]` in deg·mL·g⁻¹·dm⁻¹, concentrations in g/mL and
//! the path length in dm. Degrees are the external unit; everything else in
//! the simulator works in radians.

use crate::error::{Error, Result};

/// Placeholder specific rotation used by default configurations.
/// It is a config input, not a measured property of any compound.
pub const PLACEHOLDER_SPECIFIC_ROTATION: f64 = 12.0;

/// Default cell length in dm (35 cm).
pub const DEFAULT_PATH_LENGTH_DM: f64 = 3.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ChiralSample {
    /// Specific rotation in deg·mL·g⁻¹·dm⁻¹. Positive for the L-form.
    pub specific_rotation: f64,
    /// L-enantiomer concentration in g/mL.
    pub conc_l: f64,
    /// D-enantiomer concentration in g/mL.
    pub conc_d: f64,
    /// Optical path length in dm.
    pub path_length_dm: f64,
    /// Intensity transmissivity of the cell, applied to every mode.
    pub transmission: f64,
}

impl ChiralSample {
    pub fn new(
        specific_rotation: f64,
        conc_l: f64,
        conc_d: f64,
        path_length_dm: f64,
        transmission: f64,
    ) -> Result<Self> {
        if conc_l < 0.0 || conc_d < 0.0 {
            return Err(Error::invalid("concentrations must be non-negative"));
        }
        if path_length_dm <= 0.0 {
            return Err(Error::invalid("path length must be positive"));
        }
        if !(transmission > 0.0 && transmission <= 1.0) {
            return Err(Error::invalid("sample transmission must lie in (0, 1]"));
        }
        if !specific_rotation.is_finite() {
            return Err(Error::invalid("specific rotation must be finite"));
        }
        Ok(ChiralSample {
            specific_rotation,
            conc_l,
            conc_d,
            path_length_dm,
            transmission,
        })
    }

    /// Constructs a sample from enantiomeric excess and total concentration:
    /// `c_L = total·(1+ee)/2`, `c_D = total·(1−ee)/2`.
    pub fn from_ee(
        ee: f64,
        total_conc: f64,
        specific_rotation: f64,
        path_length_dm: f64,
    ) -> Result<Self> {
        if !(-1.0..=1.0).contains(&ee) {
            return Err(Error::invalid(format!(
                "enantiomeric excess must lie in [−1, 1], got {ee}"
            )));
        }
        if total_conc < 0.0 {
            return Err(Error::invalid("total concentration must be non-negative"));
        }
        ChiralSample::new(
            specific_rotation,
            total_conc * (1.0 + ee) / 2.0,
            total_conc * (1.0 - ee) / 2.0,
            path_length_dm,
            1.0,
        )
    }

    /// Optical rotation in radians; positive for L-dominant samples.
    pub fn rotation_angle_rad(&self) -> f64 {
        let deg = self.specific_rotation * (self.conc_l - self.conc_d) * self.path_length_dm;
        deg.to_radians()
    }

    /// `([L] − [D]) / ([L] + [D])`.
    pub fn enantiomeric_excess(&self) -> Result<f64> {
        let total = self.conc_l + self.conc_d;
        if total <= 0.0 {
            return Err(Error::UndefinedEe);
        }
        Ok((self.conc_l - self.conc_d) / total)
    }

    /// The mirror-image sample with L and D concentrations exchanged.
    pub fn swapped(&self) -> Self {
        ChiralSample {
            conc_l: self.conc_d,
            conc_d: self.conc_l,
            ..self.clone()
        }
    }
}
