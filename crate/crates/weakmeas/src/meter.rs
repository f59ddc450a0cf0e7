//! Gaussian-pointer weak measurement model.
//!
//! The apparatus is a broad momentum-space Gaussian of width Δ_p; an
//! impulsive interaction shifts the pointer by the measured eigenvalue. The
//! resulting POVM is diagonal in the observable eigenbasis with Gaussian
//! profiles, the outcome density is a Gaussian mixture with Born weights,
//! and the post-measurement state reweights each amplitude by a Gaussian
//! factor in the distance between outcome and eigenvalue.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::qcore::{check_dims, DensityMatrix, Observable, QcoreError, QuantumState};
use crate::stream::RandomStream;

#[derive(Debug, Error)]
pub enum MeterError {
    #[error("pointer spread delta_p must be positive (got {value})")]
    NonPositiveWidth { value: f64 },
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// A weak-measurement apparatus, fully specified by the pointer spread Δ_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeter {
    delta_p: f64,
}

impl GaussianMeter {
    pub fn new(delta_p: f64) -> Result<Self, MeterError> {
        if !delta_p.is_finite() || delta_p <= 0.0 {
            return Err(MeterError::NonPositiveWidth { value: delta_p });
        }
        Ok(Self { delta_p })
    }

    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }

    /// Gaussian normalizer `(π Δ_p²)^(−1/4)`.
    pub fn normalizer(&self) -> f64 {
        (std::f64::consts::PI * self.delta_p * self.delta_p).powf(-0.25)
    }

    /// Log of each amplitude weight `exp(−(p − a_i)²/(2Δ_p²))`.
    pub(crate) fn log_weights(&self, obs: &Observable, p: f64) -> Vec<f64> {
        let two_var = 2.0 * self.delta_p * self.delta_p;
        obs.eigenvalues()
            .iter()
            .map(|a| -(p - a) * (p - a) / two_var)
            .collect()
    }
}

/// Diagonal of the POVM element `M_p`: entry i is
/// `N̄_p · exp(−(p − a_i)²/(2Δ_p²))`.
pub fn povm_element(meter: &GaussianMeter, obs: &Observable, p: f64) -> Vec<f64> {
    let norm = meter.normalizer();
    meter
        .log_weights(obs, p)
        .into_iter()
        .map(|lw| norm * lw.exp())
        .collect()
}

/// Outcome probability density `N̄_p² Σ_i |α_i|² exp(−(p − a_i)²/Δ_p²)`.
pub fn outcome_pdf(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
    p: f64,
) -> Result<f64, MeterError> {
    check_dims(state.dim(), obs.dim())?;
    let n2 = meter.normalizer().powi(2);
    let pdf = state
        .probabilities()
        .iter()
        .zip(meter.log_weights(obs, p))
        .map(|(w, lw)| w * (2.0 * lw).exp())
        .sum::<f64>();
    Ok(n2 * pdf)
}

/// Post-measurement state for outcome `p`: amplitude i proportional to
/// `α_i · exp(−(p − a_i)²/(2Δ_p²))`.
pub fn post_state(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
    p: f64,
) -> Result<QuantumState, MeterError> {
    check_dims(state.dim(), obs.dim())?;
    let lw = meter.log_weights(obs, p);
    let shift = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let amps: Vec<C64> = state
        .amps()
        .iter()
        .zip(&lw)
        .map(|(a, l)| a * (l - shift).exp())
        .collect();
    Ok(QuantumState::new(amps)?)
}

/// Exact sampler for [`outcome_pdf`]: draws eigenindex i with probability
/// `|α_i|²`, then p from a Gaussian of mean `a_i` and standard deviation
/// `Δ_p/√2`.
pub fn sample_outcome(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
    rng: &mut RandomStream,
) -> Result<f64, MeterError> {
    check_dims(state.dim(), obs.dim())?;
    let i = rng.pick_weighted(&state.probabilities());
    Ok(rng.normal(obs.eigenvalue(i), meter.delta_p / std::f64::consts::SQRT_2))
}

/// Closed-form outcome moments: mean `⟨A⟩_ψ`, variance `Δ_p²/2 + (ΔA)²_ψ`.
pub fn outcome_moments(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
) -> Result<(f64, f64), MeterError> {
    let (mean, var) = crate::qcore::expectation_and_variance(state, obs)?;
    Ok((mean, 0.5 * meter.delta_p * meter.delta_p + var))
}

/// Outcome-averaged post-measurement density matrix, exact in Δ_p:
/// element (i, j) is `α_i α_j* · exp(−(a_i − a_j)²/(4Δ_p²))`.
pub fn averaged_post_density(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
) -> Result<DensityMatrix, MeterError> {
    check_dims(state.dim(), obs.dim())?;
    let quarter_var = 4.0 * meter.delta_p * meter.delta_p;
    let d = state.dim();
    let m = DMatrix::from_fn(d, d, |i, j| {
        let gap = obs.eigenvalue(i) - obs.eigenvalue(j);
        state.amp(i) * state.amp(j).conj() * (-gap * gap / quarter_var).exp()
    });
    Ok(DensityMatrix::from_matrix(m)?)
}

/// First-order expansion of [`averaged_post_density`] in `1/Δ_p²`:
/// `ρ − (1/4Δ_p²) Σ_{ij} α_i α_j* (a_i − a_j)² |a_i⟩⟨a_j|`.
///
/// Returned as a raw matrix: the truncation can lose positivity when Δ_p is
/// not large against the spectrum, so it is a diagnostic, not a state.
pub fn averaged_post_density_first_order(
    meter: &GaussianMeter,
    state: &QuantumState,
    obs: &Observable,
) -> Result<DMatrix<C64>, MeterError> {
    check_dims(state.dim(), obs.dim())?;
    let quarter_var = 4.0 * meter.delta_p * meter.delta_p;
    let d = state.dim();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let gap = obs.eigenvalue(i) - obs.eigenvalue(j);
        state.amp(i) * state.amp(j).conj() * (1.0 - gap * gap / quarter_var)
    }))
}

/// Breakpoints for quadrature over the outcome axis: ±10 widths past the
/// spectrum with a split at every eigenvalue.
pub fn quadrature_breakpoints(meter: &GaussianMeter, obs: &Observable) -> Vec<f64> {
    let mut evs: Vec<f64> = obs.eigenvalues().to_vec();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = evs[0] - 10.0 * meter.delta_p;
    let hi = evs[evs.len() - 1] + 10.0 * meter.delta_p;
    let mut pts = vec![lo];
    pts.extend(evs);
    pts.push(hi);
    pts.dedup();
    pts
}
