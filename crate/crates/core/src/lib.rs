//! Gaussian-state simulation core for entangled chiral polarimetry.
//!
//! The crate models a four-mode optical probe — two spatial channels, each
//! with horizontal and vertical polarization — in the covariance-matrix
//! formalism. Two parametric amplifiers entangle the channels, a chiral
//! sample rotates the polarization in proportion to its enantiomeric
//! imbalance, and balanced detection reads out an intensity-difference
//! observable whose quantum noise is squeezed below the shot-noise limit.
//!
//! Two mutually validating backends evaluate every observable: exact
//! covariance propagation ([`polarimetry`]) and phase-space Monte Carlo
//! sampling ([`montecarlo`]). With the `parallel` feature (default) the
//! Monte Carlo backend fans batches out over rayon; the sequential path
//! produces bitwise-identical results.

pub mod error;
pub mod gaussian;
pub mod mode;
pub mod montecarlo;
pub mod pipeline;
pub mod polarimetry;
pub mod sample;
pub mod symplectic;

pub use error::{Error, Result};
pub use gaussian::GaussianState;
pub use mode::{ModeLabel, Polarization, SpatialChannel, STANDARD_MODES};
pub use pipeline::ProbeConfig;
pub use polarimetry::{
    chiral_observable, sensitivity_report, snl_delta_theta, Backend, Observable, ObservableStats,
    SensitivityReport, SnlBaseline,
};
pub use sample::ChiralSample;
pub use symplectic::{compose, PaSpec, SymplecticOp};
