//! Phase-space Monte Carlo backend.
//!
//! Quadrature vectors are drawn from the Gaussian `(mean, Σ)` and each mode's
//! intensity is evaluated with the symmetric-ordering correction
//! `n = (X² + P² − 2) / 4`, which makes sample averages estimate normally
//! ordered photon numbers. Valid for bright beams (carrier α² ≳ 100), where
//! the quartic sampling terms are small against the carrier-scaled noise.
//!
//! Reproducibility: work is split into fixed-size batches, batch `b` draws
//! from ChaCha stream `b` of the master seed, and batch moments are reduced
//! in batch order. Results are therefore bitwise identical whether batches
//! run sequentially or on any number of threads.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, PHYSICALITY_TOL};
use crate::polarimetry::{Backend, Observable, ObservableStats, SLOPE_STEP};

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 1_000;

/// Samples per ChaCha substream batch.
const BATCH_SIZE: u64 = 8_192;

/// Draws quadrature vectors from a Gaussian state via the Cholesky factor
/// of its covariance.
pub struct QuadratureSampler {
    mean: DVector<f64>,
    lower: DMatrix<f64>,
    dim: usize,
}

impl QuadratureSampler {
    pub fn new(state: &GaussianState) -> Result<Self> {
        state.check_physical(PHYSICALITY_TOL)?;
        let chol = state.cov().clone().cholesky().ok_or_else(|| {
            Error::NonPhysical("covariance is not positive definite".to_string())
        })?;
        Ok(QuadratureSampler {
            mean: state.mean().clone(),
            lower: chol.l(),
            dim: state.mean().len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fills `out` with one sample `μ + L z`, `z ~ N(0, I)`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        let mut z = vec![0.0; self.dim];
        for zi in &mut z {
            *zi = rng.sample(StandardNormal);
        }
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = self.mean[i];
            // L is lower triangular.
            for (j, &zj) in z.iter().enumerate().take(i + 1) {
                acc += self.lower[(i, j)] * zj;
            }
            *o = acc;
        }
    }
}

/// Applies the Jones rotation to a sampled quadrature vector in place,
/// for every `(H, V)` index pair in `pairs`.
fn rotate_sample(sample: &mut [f64], pairs: &[(usize, usize)], cos_t: f64, sin_t: f64) {
    for &(h, v) in pairs {
        for q in 0..2 {
            let hq = 2 * h + q;
            let vq = 2 * v + q;
            let (a, b) = (sample[hq], sample[vq]);
            sample[hq] = cos_t * a - sin_t * b;
            sample[vq] = sin_t * a + cos_t * b;
        }
    }
}

fn intensity_sum(sample: &[f64], signs: &[(usize, f64)]) -> f64 {
    signs
        .iter()
        .map(|&(m, s)| {
            let x = sample[2 * m];
            let p = sample[2 * m + 1];
            s * (x * x + p * p - 2.0) / 4.0
        })
        .sum()
}

/// Accumulated moments of one batch, shifted by the analytic mean for
/// numerical stability.
#[derive(Debug, Clone, Copy, Default)]
struct BatchMoments {
    n: u64,
    sum: f64,
    sum_sq: f64,
    sum_plus: f64,
    sum_minus: f64,
}

struct McJob {
    sampler: QuadratureSampler,
    signs: Vec<(usize, f64)>,
    rotation_pairs: Vec<(usize, usize)>,
    shift: f64,
    seed: u64,
}

impl McJob {
    fn run_batch(&self, batch: u64, count: u64) -> BatchMoments {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        let mut sample = vec![0.0; self.sampler.dim()];
        let mut rotated = vec![0.0; self.sampler.dim()];
        let (sin_h, cos_h) = SLOPE_STEP.sin_cos();
        let mut moments = BatchMoments {
            n: count,
            ..Default::default()
        };
        for _ in 0..count {
            self.sampler.sample_into(&mut rng, &mut sample);
            let v = intensity_sum(&sample, &self.signs) - self.shift;
            moments.sum += v;
            moments.sum_sq += v * v;

            rotated.copy_from_slice(&sample);
            rotate_sample(&mut rotated, &self.rotation_pairs, cos_h, sin_h);
            moments.sum_plus += intensity_sum(&rotated, &self.signs) - self.shift;

            rotated.copy_from_slice(&sample);
            rotate_sample(&mut rotated, &self.rotation_pairs, cos_h, -sin_h);
            moments.sum_minus += intensity_sum(&rotated, &self.signs) - self.shift;
        }
        moments
    }
}

fn batch_plan(samples: u64) -> Vec<(u64, u64)> {
    let mut plan = Vec::new();
    let mut remaining = samples;
    let mut batch = 0;
    while remaining > 0 {
        let count = remaining.min(BATCH_SIZE);
        plan.push((batch, count));
        remaining -= count;
        batch += 1;
    }
    plan
}

fn finalize(job: &McJob, batches: Vec<BatchMoments>, samples: u64) -> ObservableStats {
    let mut total = BatchMoments::default();
    for b in batches {
        total.n += b.n;
        total.sum += b.sum;
        total.sum_sq += b.sum_sq;
        total.sum_plus += b.sum_plus;
        total.sum_minus += b.sum_minus;
    }
    let n = total.n as f64;
    let mean_shifted = total.sum / n;
    let variance = (total.sum_sq - total.sum * total.sum / n) / (n - 1.0);
    let slope = (total.sum_plus - total.sum_minus) / n / (2.0 * SLOPE_STEP);
    ObservableStats {
        mean: job.shift + mean_shifted,
        variance,
        slope_wrt_theta: slope,
        backend: Backend::MonteCarlo,
        mc_samples: samples,
        mc_stderr: (variance / n).sqrt(),
    }
}

fn build_job(
    state: &GaussianState,
    observable: Observable,
    samples: u64,
    seed: u64,
) -> Result<McJob> {
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let signs = observable.signs();
    for &(m, _) in &signs {
        if m >= state.mode_count() {
            return Err(Error::invalid(
                "observable refers to modes absent from the state",
            ));
        }
    }
    let mut max_carrier_photons: f64 = 0.0;
    for &(m, _) in &signs {
        let label = state.labels()[m];
        let carrier = state.carrier(label)?;
        max_carrier_photons = max_carrier_photons.max(carrier.norm_sqr());
    }
    if max_carrier_photons < 100.0 {
        log::warn!(
            "Monte Carlo outside the bright-beam regime (max carrier photons {max_carrier_photons:.1} < 100); ordering corrections may bias results"
        );
    }
    let rotation_pairs = observable
        .rotation_channels()
        .into_iter()
        .map(|ch| {
            let (h, v) = crate::mode::channel_modes(ch);
            Ok((state.index_of(h)?, state.index_of(v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let shift = crate::polarimetry::analytic_mean(state, &signs);
    Ok(McJob {
        sampler: QuadratureSampler::new(state)?,
        signs,
        rotation_pairs,
        shift,
        seed,
    })
}

/// Monte Carlo statistics of an observable; bit-reproducible for a fixed
/// seed and sample count regardless of thread count.
pub fn monte_carlo_stats(
    state: &GaussianState,
    observable: Observable,
    samples: u64,
    seed: u64,
) -> Result<ObservableStats> {
    let job = build_job(state, observable, samples, seed)?;
    let plan = batch_plan(samples);
    #[cfg(feature = "parallel")]
    let batches: Vec<BatchMoments> = plan
        .par_iter()
        .map(|&(b, count)| job.run_batch(b, count))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let batches: Vec<BatchMoments> = plan
        .iter()
        .map(|&(b, count)| job.run_batch(b, count))
        .collect();
    Ok(finalize(&job, batches, samples))
}

/// Reference sequential path: identical batching, reduction and results as
/// [`monte_carlo_stats`], executed on the calling thread. Used by the
/// validation suite and benchmarks.
pub fn monte_carlo_stats_seq(
    state: &GaussianState,
    observable: Observable,
    samples: u64,
    seed: u64,
) -> Result<ObservableStats> {
    let job = build_job(state, observable, samples, seed)?;
    let batches: Vec<BatchMoments> = batch_plan(samples)
        .iter()
        .map(|&(b, count)| job.run_batch(b, count))
        .collect();
    Ok(finalize(&job, batches, samples))
}
