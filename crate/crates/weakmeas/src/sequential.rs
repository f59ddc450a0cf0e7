//! Repeated weak measurements on a single copy.
//!
//! One realization follows the four-step schema: weakly measure, record the
//! pointer outcome, restore the apparatus, repeat on the updated state. The
//! joint outcome density stays a Born-weighted Gaussian-mixture product, so
//! the outcome average y_M concentrates on the eigenvalues — not on ⟨A⟩ —
//! reproducing strong-measurement statistics in the large-M limit, while the
//! outcome-averaged density matrix quenches its off-diagonal elements in the
//! eigenbasis.
//!
//! All M-step products accumulate in log space with max-subtraction; naive
//! products underflow near M ≈ 400 already for Δ_p = 10.

use thiserror::Error;

use crate::meter::{self, GaussianMeter, MeterError};
use crate::numeric::log_sum_exp;
use crate::qcore::{check_dims, DensityMatrix, Observable, QcoreError, QuantumState};
use crate::stream::RandomStream;
use num_complex::Complex64 as C64;

#[derive(Debug, Error)]
pub enum SequentialError {
    #[error("a measurement record needs at least one outcome")]
    EmptyRecord,
    #[error("outcome {index} is not finite ({value})")]
    NonFiniteOutcome { index: usize, value: f64 },
    #[error("all amplitude weights degenerate even in log space")]
    DegenerateRecord,
    #[error("epsilon must be positive (got {value})")]
    NonPositiveEpsilon { value: f64 },
    #[error(transparent)]
    Meter(#[from] MeterError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// An ordered sequence of pointer outcomes from one single-copy realization,
/// together with the apparatus and observable that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    outcomes: Vec<f64>,
    meter: GaussianMeter,
    obs: Observable,
}

impl MeasurementRecord {
    pub fn new(
        outcomes: Vec<f64>,
        meter: GaussianMeter,
        obs: Observable,
    ) -> Result<Self, SequentialError> {
        if outcomes.is_empty() {
            return Err(SequentialError::EmptyRecord);
        }
        for (index, &value) in outcomes.iter().enumerate() {
            if !value.is_finite() {
                return Err(SequentialError::NonFiniteOutcome { index, value });
            }
        }
        Ok(Self {
            outcomes,
            meter,
            obs,
        })
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn meter(&self) -> &GaussianMeter {
        &self.meter
    }

    pub fn observable(&self) -> &Observable {
        &self.obs
    }

    pub fn y_mean(&self) -> f64 {
        self.outcomes.iter().sum::<f64>() / self.len() as f64
    }
}

/// One full single-copy run: the record plus every intermediate state.
#[derive(Debug, Clone)]
pub struct RealizationTrace {
    record: MeasurementRecord,
    states: Vec<QuantumState>,
    y_mean: f64,
}

impl RealizationTrace {
    pub fn record(&self) -> &MeasurementRecord {
        &self.record
    }

    /// M + 1 states: initial plus one per outcome.
    pub fn states(&self) -> &[QuantumState] {
        &self.states
    }

    pub fn initial_state(&self) -> &QuantumState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &QuantumState {
        self.states.last().unwrap()
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }
}

/// Per-step Bayesian update: identical to [`meter::post_state`], exposed as
/// the schema's step (iii).
pub fn bayes_update(
    state: &QuantumState,
    meter: &GaussianMeter,
    obs: &Observable,
    p: f64,
) -> Result<QuantumState, SequentialError> {
    Ok(meter::post_state(meter, state, obs, p)?)
}

/// Per-eigenindex log weights `−Σ_j (p_j − a_i)²/Δ_p²` of the joint density.
///
/// Terms are summed in a canonical (sorted) order so that permuting the
/// record leaves the result bit-identical, not merely close.
fn joint_log_weights(record: &MeasurementRecord) -> Vec<f64> {
    let var = record.meter.delta_p() * record.meter.delta_p();
    record
        .obs
        .eigenvalues()
        .iter()
        .map(|a| {
            let mut terms: Vec<f64> = record
                .outcomes
                .iter()
                .map(|p| -(p - a) * (p - a) / var)
                .collect();
            terms.sort_by(f64::total_cmp);
            terms.iter().sum()
        })
        .collect()
}

/// Log of the joint outcome density
/// `(N̄_p²)^M Σ_i |α_i|² Π_j exp(−(p_j − a_i)²/Δ_p²)`.
pub fn joint_log_pdf(
    record: &MeasurementRecord,
    initial: &QuantumState,
) -> Result<f64, SequentialError> {
    check_dims(initial.dim(), record.obs.dim())?;
    let m = record.len() as f64;
    let log_norm2 = 2.0 * record.meter.normalizer().ln();
    let terms: Vec<f64> = initial
        .probabilities()
        .iter()
        .zip(joint_log_weights(record))
        .map(|(w, lw)| if *w > 0.0 { w.ln() + lw } else { f64::NEG_INFINITY })
        .collect();
    Ok(m * log_norm2 + log_sum_exp(&terms))
}

/// State after the whole record in one log-space pass: amplitude i
/// proportional to `α_i Π_j exp(−(p_j − a_i)²/(2Δ_p²))`.
///
/// Equal to the left fold of [`bayes_update`] over the outcomes.
pub fn state_after_record(
    record: &MeasurementRecord,
    initial: &QuantumState,
) -> Result<QuantumState, SequentialError> {
    check_dims(initial.dim(), record.obs.dim())?;
    let half_log_weights: Vec<f64> = joint_log_weights(record)
        .into_iter()
        .map(|lw| 0.5 * lw)
        .collect();
    let shift = half_log_weights
        .iter()
        .zip(initial.amps())
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(lw, _)| *lw)
        .fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(SequentialError::DegenerateRecord);
    }
    let amps: Vec<C64> = initial
        .amps()
        .iter()
        .zip(&half_log_weights)
        .map(|(a, lw)| a * (lw - shift).exp())
        .collect();
    QuantumState::new(amps).map_err(|_| SequentialError::DegenerateRecord)
}

/// Runs one realization of M repeated weak measurements, restoring the
/// apparatus before every step.
pub fn run_realization(
    meter: &GaussianMeter,
    obs: &Observable,
    initial: &QuantumState,
    m: usize,
    rng: &mut RandomStream,
) -> Result<RealizationTrace, SequentialError> {
    if m == 0 {
        return Err(SequentialError::EmptyRecord);
    }
    check_dims(initial.dim(), obs.dim())?;
    let mut states = Vec::with_capacity(m + 1);
    states.push(initial.clone());
    let mut outcomes = Vec::with_capacity(m);
    for _ in 0..m {
        let current = states.last().unwrap();
        let p = meter::sample_outcome(meter, current, obs, rng)?;
        let next = meter::post_state(meter, current, obs, p)?;
        outcomes.push(p);
        states.push(next);
    }
    let record = MeasurementRecord::new(outcomes, *meter, obs.clone())?;
    let y_mean = record.y_mean();
    Ok(RealizationTrace {
        record,
        states,
        y_mean,
    })
}

/// Density of the outcome average:
/// `√(M/(πΔ_p²)) Σ_i |α_i|² exp(−M(y − a_i)²/Δ_p²)`.
pub fn ymean_pdf(
    meter: &GaussianMeter,
    obs: &Observable,
    initial: &QuantumState,
    m: usize,
    y: f64,
) -> Result<f64, SequentialError> {
    if m == 0 {
        return Err(SequentialError::EmptyRecord);
    }
    check_dims(initial.dim(), obs.dim())?;
    let var = meter.delta_p() * meter.delta_p();
    let mf = m as f64;
    let norm = (mf / (std::f64::consts::PI * var)).sqrt();
    Ok(norm
        * initial
            .probabilities()
            .iter()
            .zip(obs.eigenvalues())
            .map(|(w, a)| w * (-mf * (y - a) * (y - a) / var).exp())
            .sum::<f64>())
}

/// Outcome-averaged reduced density matrix after M measurements:
/// element (i, j) is `ρ_ij · exp(−M(a_i − a_j)²/(4Δ_p²))`.
pub fn average_reduced_density(
    meter: &GaussianMeter,
    obs: &Observable,
    initial: &QuantumState,
    m: usize,
) -> Result<DensityMatrix, SequentialError> {
    if m == 0 {
        return Err(SequentialError::EmptyRecord);
    }
    check_dims(initial.dim(), obs.dim())?;
    let quarter_var = 4.0 * meter.delta_p() * meter.delta_p();
    let d = initial.dim();
    let mf = m as f64;
    let mat = nalgebra::DMatrix::from_fn(d, d, |i, j| {
        let gap = obs.eigenvalue(i) - obs.eigenvalue(j);
        initial.amp(i) * initial.amp(j).conj() * (-mf * gap * gap / quarter_var).exp()
    });
    Ok(DensityMatrix::from_matrix(mat)?)
}

/// Statistical error of the M-outcome average, `ε = Δ_p/√(2M)`.
pub fn epsilon(delta_p: f64, m: usize) -> f64 {
    delta_p / (2.0 * m as f64).sqrt()
}

/// Error-disturbance relation
/// `D(ε) = Σ_{ij} |α_i|²|α_j|² (1 − exp(−(a_i − a_j)²/(8ε²)))`.
///
/// Equals `1 − tr(ρ ⟨ρ_red⟩)` for every `(Δ_p, M)` pair with
/// `Δ_p/√(2M) = ε`; the disturbance depends on the pair only through ε.
pub fn error_disturbance(
    initial: &QuantumState,
    obs: &Observable,
    eps: f64,
) -> Result<f64, SequentialError> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(SequentialError::NonPositiveEpsilon { value: eps });
    }
    check_dims(initial.dim(), obs.dim())?;
    let probs = initial.probabilities();
    let eight_eps2 = 8.0 * eps * eps;
    let mut d = 0.0;
    for (i, wi) in probs.iter().enumerate() {
        for (j, wj) in probs.iter().enumerate() {
            let gap = obs.eigenvalue(i) - obs.eigenvalue(j);
            d += wi * wj * (1.0 - (-gap * gap / eight_eps2).exp());
        }
    }
    Ok(d)
}

/// `ε → 0` limit of [`error_disturbance`]: `Σ_i |α_i|²(1 − |α_i|²)`.
pub fn error_disturbance_limit(initial: &QuantumState) -> f64 {
    initial
        .probabilities()
        .iter()
        .map(|w| w * (1.0 - w))
        .sum()
}
