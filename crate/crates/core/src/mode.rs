//! Optical mode bookkeeping for the four-mode polarimetry pipeline.
//!
//! The probe consists of two spatial channels (`A`, `B`), each carrying a
//! horizontal and a vertical polarization mode. The canonical ordering
//! `A·H, A·V, B·H, B·V` fixes how quadratures are laid out in mean vectors
//! and covariance matrices: mode `i` owns quadratures `(X_i, P_i)` at
//! indices `(2i, 2i + 1)`.

use std::fmt;

/// Spatial channel of the two-beam probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpatialChannel {
    A,
    B,
}

/// Linear polarization of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

/// One of the four optical modes of the standard pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub channel: SpatialChannel,
    pub polarization: Polarization,
}

impl ModeLabel {
    pub const fn new(channel: SpatialChannel, polarization: Polarization) -> Self {
        ModeLabel {
            channel,
            polarization,
        }
    }

    /// Position in the canonical `A·H, A·V, B·H, B·V` order.
    pub fn canonical_index(&self) -> usize {
        let ch = match self.channel {
            SpatialChannel::A => 0,
            SpatialChannel::B => 2,
        };
        let pol = match self.polarization {
            Polarization::H => 0,
            Polarization::V => 1,
        };
        ch + pol
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ch = match self.channel {
            SpatialChannel::A => 'A',
            SpatialChannel::B => 'B',
        };
        let pol = match self.polarization {
            Polarization::H => 'H',
            Polarization::V => 'V',
        };
        write!(f, "{ch}·{pol}")
    }
}

pub const MODE_AH: ModeLabel = ModeLabel::new(SpatialChannel::A, Polarization::H);
pub const MODE_AV: ModeLabel = ModeLabel::new(SpatialChannel::A, Polarization::V);
pub const MODE_BH: ModeLabel = ModeLabel::new(SpatialChannel::B, Polarization::H);
pub const MODE_BV: ModeLabel = ModeLabel::new(SpatialChannel::B, Polarization::V);

/// The four standard modes in canonical order.
pub const STANDARD_MODES: [ModeLabel; 4] = [MODE_AH, MODE_AV, MODE_BH, MODE_BV];

/// `(H, V)` mode pair of a spatial channel.
pub fn channel_modes(channel: SpatialChannel) -> (ModeLabel, ModeLabel) {
    match channel {
        SpatialChannel::A => (MODE_AH, MODE_AV),
        SpatialChannel::B => (MODE_BH, MODE_BV),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_ah_av_bh_bv() {
        for (i, label) in STANDARD_MODES.iter().enumerate() {
            assert_eq!(label.canonical_index(), i);
        }
    }

    #[test]
    fn labels_are_unique() {
        for (i, a) in STANDARD_MODES.iter().enumerate() {
            for b in STANDARD_MODES.iter().skip(i + 1) {
                assert_ne!(a, b);
            }
        }
    }
}
