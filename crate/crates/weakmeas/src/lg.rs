//! Resource and error accounting for Leggett-Garg tests.
//!
//! The protocol takes four series of two measurements each on M identical
//! copies: the weak strategy splits M into four subensembles and uses the
//! broad pointer for the non-invasive first measurements, while the strong
//! strategy buys the same statistical error with eight projective
//! subensembles. Everything here is closed-form; a Monte Carlo check of the
//! weak standard error lives in the experiment layer and the tests.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LgError {
    #[error("the LG budget needs at least 8 copies (got {m})")]
    EnsembleTooSmall { m: u64 },
    #[error("delta_p must be positive (got {value})")]
    NonPositiveWidth { value: f64 },
    #[error("delta_a must be non-negative and finite (got {value})")]
    InvalidStateUncertainty { value: f64 },
}

/// Resource plan: M identical copies, pointer spread Δ_p, and the state
/// uncertainty (ΔA)_ψ of the measured observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LGPlan {
    ensemble_size: u64,
    delta_p: f64,
    delta_a: f64,
}

impl LGPlan {
    pub fn new(ensemble_size: u64, delta_p: f64, delta_a: f64) -> Result<Self, LgError> {
        if ensemble_size < 8 {
            return Err(LgError::EnsembleTooSmall { m: ensemble_size });
        }
        if !delta_p.is_finite() || delta_p <= 0.0 {
            return Err(LgError::NonPositiveWidth { value: delta_p });
        }
        if !delta_a.is_finite() || delta_a < 0.0 {
            return Err(LgError::InvalidStateUncertainty { value: delta_a });
        }
        Ok(Self {
            ensemble_size,
            delta_p,
            delta_a,
        })
    }

    pub fn ensemble_size(&self) -> u64 {
        self.ensemble_size
    }

    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }

    pub fn delta_a(&self) -> f64 {
        self.delta_a
    }
}

/// Statistical error of the weak strategy on an M/4 subensemble:
/// `ε_w = (Δ_p/√2)/√(M/4) = Δ_p·√2/√M`.
///
/// Keeps only the Δ_p/√2 part of the outcome spread; the full-variance
/// version is [`exact_weak_error`].
pub fn weak_error(plan: &LGPlan) -> f64 {
    plan.delta_p * std::f64::consts::SQRT_2 / (plan.ensemble_size as f64).sqrt()
}

/// Standard error with the full outcome variance `Δ_p²/2 + (ΔA)²` on an M/4
/// subensemble. Diagnostic for how good the Δ_p-only approximation is.
pub fn exact_weak_error(plan: &LGPlan) -> f64 {
    let var = 0.5 * plan.delta_p * plan.delta_p + plan.delta_a * plan.delta_a;
    (var / (plan.ensemble_size as f64 / 4.0)).sqrt()
}

/// Strong-measurement ensemble size with the same error as the weak
/// strategy: `M_s = (ΔA)²/ε_w² = (M/2)·(ΔA/Δ_p)²`.
pub fn strong_equivalent_ensemble(plan: &LGPlan) -> f64 {
    let eps_w = weak_error(plan);
    let from_error = (plan.delta_a / eps_w).powi(2);
    let algebraic = 0.5 * plan.ensemble_size as f64 * (plan.delta_a / plan.delta_p).powi(2);
    debug_assert!(
        (from_error - algebraic).abs() <= 1e-12 * algebraic.max(1.0),
        "the two routes to M_s disagree: {from_error} vs {algebraic}"
    );
    algebraic
}

/// Total strong-measurement budget for all eight measurements:
/// `8·M_s = M·4(ΔA)²/Δ_p²`.
pub fn total_strong_budget(plan: &LGPlan) -> f64 {
    8.0 * strong_equivalent_ensemble(plan)
}

/// Everything the comparison produces, mutually consistent by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LGReport {
    /// ε_w with the Δ_p-only spread.
    pub weak_error: f64,
    /// Standard error with the full variance Δ_p²/2 + (ΔA)².
    pub exact_weak_error: f64,
    /// M_s, as a real number.
    pub strong_equivalent_ensemble: f64,
    /// 8·M_s, as a real number.
    pub total_strong_budget: f64,
    /// Whole copies needed for the strong strategy (ceiling of the budget).
    pub strong_copies_needed: u64,
    /// M / (8·M_s) = Δ_p²/(4(ΔA)²).
    pub advantage_ratio: f64,
    /// True when (ΔA)/Δ_p < 1/2, i.e. the strong strategy needs fewer
    /// copies.
    pub strong_wins: bool,
    /// Set when Δ_p is not large against ΔA: the second measurement of each
    /// weak series then runs on a noticeably disturbed state, a bias the
    /// error accounting above does not capture.
    pub weak_state_bias_warning: bool,
}

/// Compares the weak and strong strategies for one plan.
pub fn compare(plan: &LGPlan) -> LGReport {
    let eps_w = weak_error(plan);
    let m_s = strong_equivalent_ensemble(plan);
    let total = total_strong_budget(plan);
    let ratio = plan.delta_p * plan.delta_p / (4.0 * plan.delta_a * plan.delta_a);
    LGReport {
        weak_error: eps_w,
        exact_weak_error: exact_weak_error(plan),
        strong_equivalent_ensemble: m_s,
        total_strong_budget: total,
        strong_copies_needed: total.ceil() as u64,
        advantage_ratio: ratio,
        strong_wins: plan.delta_a / plan.delta_p < 0.5,
        weak_state_bias_warning: plan.delta_p < 10.0 * plan.delta_a,
    }
}
