//! Randomized structural invariants of the symplectic layer: composed
//! pipeline operations stay symplectic, states stay physical, and the loss
//! channel contracts covariances toward the vacuum.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use chirasim_core::gaussian::GaussianState;
use chirasim_core::mode::{SpatialChannel, STANDARD_MODES};
use chirasim_core::symplectic::{compose, SymplecticOp, SYMPLECTIC_TOL};
use chirasim_core::PaSpec;

fn random_op(rng: &mut StdRng) -> SymplecticOp {
    let modes = 4;
    let i = rng.random_range(0..4usize);
    let mut j = rng.random_range(0..3usize);
    if j >= i {
        j += 1;
    }
    match rng.random_range(0..4u8) {
        0 => SymplecticOp::two_mode_squeezer(
            modes,
            (i, j),
            rng.random_range(0.0..1.5),
            rng.random_range(-3.2..3.2),
        )
        .unwrap(),
        1 => SymplecticOp::beam_splitter(
            modes,
            i,
            j,
            rng.random_range(0.0..=1.0),
            rng.random_range(-3.2..3.2),
        )
        .unwrap(),
        2 => SymplecticOp::jones_rotator(modes, i, j, rng.random_range(-1.6..1.6)).unwrap(),
        _ => SymplecticOp::phase_shifter(modes, i, rng.random_range(-3.2..3.2)).unwrap(),
    }
}

#[test]
fn thousand_random_compositions_stay_symplectic_and_physical() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let depth = rng.random_range(1..=6usize);
        let ops: Vec<SymplecticOp> = (0..depth).map(|_| random_op(&mut rng)).collect();
        let composed = compose(4, &ops).unwrap();
        let defect = composed.symplectic_defect();
        assert!(
            defect < SYMPLECTIC_TOL,
            "trial {trial}: symplectic defect {defect:.3e}"
        );

        let state = GaussianState::vacuum(4).unwrap().apply(&composed).unwrap();
        let nu_min = state.min_symplectic_eigenvalue();
        assert!(
            nu_min >= 1.0 - 1e-9,
            "trial {trial}: minimum symplectic eigenvalue {nu_min}"
        );
    }
}

#[test]
fn squeeze_then_antisqueeze_restores_state() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let r = rng.random_range(0.0..1.5);
        let phase = rng.random_range(-3.2..3.2);
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(r, phase, (STANDARD_MODES[0], STANDARD_MODES[2])).unwrap();
        let anti = PaSpec::new(
            r,
            phase + std::f64::consts::PI,
            (STANDARD_MODES[0], STANDARD_MODES[2]),
        )
        .unwrap();
        let round = vac
            .two_mode_squeeze(&spec)
            .unwrap()
            .two_mode_squeeze(&anti)
            .unwrap();
        let max_dev = round
            .cov()
            .iter()
            .zip(vac.cov().iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        assert!(max_dev < 1e-10, "deviation {max_dev}");
    }
}

fn eigen_distance_from_one(state: &GaussianState) -> f64 {
    state
        .cov()
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max((l - 1.0).abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loss_contracts_toward_vacuum(
        r in 0.0..1.5f64,
        phase in -3.2..3.2f64,
        eta in 0.0..=1.0f64,
        mode_idx in 0..4usize,
    ) {
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(r, phase, (STANDARD_MODES[1], STANDARD_MODES[3])).unwrap();
        let state = vac.two_mode_squeeze(&spec).unwrap();
        let before = eigen_distance_from_one(&state);
        let lossy = state.loss_channel(STANDARD_MODES[mode_idx], eta).unwrap();
        let after = eigen_distance_from_one(&lossy);
        prop_assert!(after <= before + 1e-10, "after {after} > before {before}");
    }

    #[test]
    fn photon_number_respects_passive_ops_and_loss(
        r in 0.0..1.2f64,
        alpha in 0.0..40.0f64,
        theta in -1.5..1.5f64,
        phi in -3.2..3.2f64,
        eta in 0.0..=1.0f64,
    ) {
        let probe = chirasim_core::ProbeConfig {
            squeeze_r: r,
            carrier_alpha: alpha,
            mode_transmission: [1.0; 4],
            detector_qe: 1.0,
            ..Default::default()
        };
        let state = probe.probe_state().unwrap();
        let n0 = state.total_photons();

        let rotated = state.polarization_rotate(SpatialChannel::A, theta).unwrap();
        prop_assert!((rotated.total_photons() - n0).abs() <= 1e-9 * (1.0 + n0));

        let shifted = state.phase_shift(STANDARD_MODES[2], phi).unwrap();
        prop_assert!((shifted.total_photons() - n0).abs() <= 1e-9 * (1.0 + n0));

        let lossy = state.uniform_loss(eta).unwrap();
        prop_assert!((lossy.total_photons() - eta * n0).abs() <= 1e-9 * (1.0 + n0));
    }

    #[test]
    fn applied_ops_preserve_physicality(
        r in 0.0..1.5f64,
        t in 0.0..=1.0f64,
        theta in -1.5..1.5f64,
    ) {
        let vac = GaussianState::vacuum(4).unwrap();
        let spec = PaSpec::new(r, 0.0, (STANDARD_MODES[0], STANDARD_MODES[2])).unwrap();
        let state = vac
            .two_mode_squeeze(&spec)
            .unwrap()
            .beam_splitter(STANDARD_MODES[0], STANDARD_MODES[1], t, 0.3)
            .unwrap()
            .polarization_rotate(SpatialChannel::B, theta)
            .unwrap();
        prop_assert!(state.min_symplectic_eigenvalue() >= 1.0 - 1e-9);
    }
}
