//! Experiment configuration: JSON schema, defaults, and total validation.
//!
//! A config file must carry every field below (JSON, names as-is, unknown
//! fields rejected); the CLI fills in per-experiment defaults when no file
//! is given and applies flag overrides on top. Validation happens once,
//! up front, with field-precise errors — the experiment code afterwards can
//! assume every module precondition holds.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{Observable, QuantumState};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config is not valid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("config field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

/// The six runnable experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Single weak measurements: moments, histogram, POVM completeness.
    MeterCheck,
    /// The N-slot pointer apparatus, closed forms vs sampled outcomes.
    Idealized,
    /// Repeated weak measurements on a single copy.
    Repeat,
    /// Leggett-Garg weak-vs-strong resource accounting.
    Lg,
    /// Minimize the state-averaged tomography error volume over |b₊|².
    TomoOptimize,
    /// Weak-value tomography round trip, noiseless and noisy.
    TomoRoundtrip,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::MeterCheck => "meter-check",
            Self::Idealized => "idealized",
            Self::Repeat => "repeat",
            Self::Lg => "lg",
            Self::TomoOptimize => "tomo-optimize",
            Self::TomoRoundtrip => "tomo-roundtrip",
        }
    }
}

/// One experiment run, fully specified.
///
/// `state` holds complex amplitudes as `[re, im]` pairs over the observable
/// eigenbasis. For `idealized`, `m_steps` is the slot count N; for `repeat`
/// it is the measurements per copy; for `lg`, `realizations` is the ensemble
/// size M. `b_plus_sq` only applies to the tomography experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub state: Vec<[f64; 2]>,
    pub eigenvalues: Vec<f64>,
    pub delta_p: f64,
    pub m_steps: usize,
    pub realizations: usize,
    pub seed: u64,
    pub output_path: Option<String>,
    pub b_plus_sq: Option<f64>,
}

impl ExperimentConfig {
    /// Reasonable defaults per experiment; the CLI starts from these.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let base = Self {
            experiment: kind,
            state: vec![[0.6, 0.0], [0.8, 0.0]],
            eigenvalues: vec![1.0, -1.0],
            delta_p: 10.0,
            m_steps: 1,
            realizations: 100_000,
            seed: 42,
            output_path: None,
            b_plus_sq: None,
        };
        match kind {
            ExperimentKind::MeterCheck => base,
            ExperimentKind::Idealized => Self {
                m_steps: 8,
                realizations: 50_000,
                ..base
            },
            ExperimentKind::Repeat => Self {
                m_steps: 10_000,
                realizations: 2_000,
                ..base
            },
            ExperimentKind::Lg => Self {
                state: vec![[1.0, 0.0], [1.0, 0.0]],
                realizations: 1_000_000,
                ..base
            },
            ExperimentKind::TomoOptimize => Self {
                delta_p: 1.0,
                m_steps: 5_000,
                realizations: 1,
                ..base
            },
            ExperimentKind::TomoRoundtrip => Self {
                state: vec![[1.0, 0.0], [0.0, 1.0]],
                delta_p: 1.0,
                m_steps: 5_000,
                realizations: 1_000,
                b_plus_sq: Some(0.5),
                ..base
            },
        }
    }

    /// Loads and parses a config file. Validation is separate.
    pub fn from_file(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// The configured amplitudes as a normalized state.
    pub fn quantum_state(&self) -> Result<QuantumState, ConfigError> {
        let amps: Vec<C64> = self
            .state
            .iter()
            .map(|[re, im]| C64::new(*re, *im))
            .collect();
        QuantumState::new(amps).map_err(|e| invalid("state", e.to_string()))
    }

    /// The configured spectrum as an observable.
    pub fn observable(&self) -> Result<Observable, ConfigError> {
        Observable::from_eigenvalues(self.eigenvalues.clone())
            .map_err(|e| invalid("eigenvalues", e.to_string()))
    }

    /// Checks every module precondition this run will rely on.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, [re, im]) in self.state.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(invalid(
                    &format!("state[{i}]"),
                    "amplitude components must be finite",
                ));
            }
        }
        let state = self.quantum_state()?;
        for (i, a) in self.eigenvalues.iter().enumerate() {
            if !a.is_finite() {
                return Err(invalid(&format!("eigenvalues[{i}]"), "must be finite"));
            }
        }
        let obs = self.observable()?;
        if state.dim() != obs.dim() {
            return Err(invalid(
                "eigenvalues",
                format!(
                    "length {} does not match state dimension {}",
                    obs.dim(),
                    state.dim()
                ),
            ));
        }
        if !self.delta_p.is_finite() || self.delta_p <= 0.0 {
            return Err(invalid("delta_p", "must be positive and finite"));
        }
        if self.m_steps < 1 {
            return Err(invalid("m_steps", "must be at least 1"));
        }
        if self.realizations < 1 {
            return Err(invalid("realizations", "must be at least 1"));
        }
        if let Some(t) = self.b_plus_sq {
            if t.is_nan() || t <= 0.0 || t >= 1.0 {
                return Err(invalid(
                    "b_plus_sq",
                    format!("must lie strictly inside (0, 1), got {t}"),
                ));
            }
        }

        match self.experiment {
            ExperimentKind::Idealized => {
                if self.m_steps < 3 {
                    return Err(invalid(
                        "m_steps",
                        "the idealized apparatus needs at least 3 slots",
                    ));
                }
                if state.dim() != 2 {
                    return Err(invalid("state", "the idealized apparatus is qubit-only"));
                }
                if self.eigenvalues != vec![1.0, -1.0] {
                    return Err(invalid(
                        "eigenvalues",
                        "the idealized pointer statistics assume the ±1 observable: use [1, -1]",
                    ));
                }
            }
            ExperimentKind::Lg => {
                if self.realizations < 8 {
                    return Err(invalid(
                        "realizations",
                        "the LG plan needs an ensemble of at least 8 copies",
                    ));
                }
                let (_, var) = crate::qcore::expectation_and_variance(&state, &obs)
                    .map_err(|e| invalid("state", e.to_string()))?;
                if var <= 0.0 {
                    return Err(invalid(
                        "state",
                        "an eigenstate has zero uncertainty; the LG comparison degenerates",
                    ));
                }
            }
            ExperimentKind::TomoRoundtrip | ExperimentKind::TomoOptimize => {
                if state.dim() != 2 {
                    return Err(invalid("state", "tomography experiments are qubit-only"));
                }
            }
            ExperimentKind::MeterCheck | ExperimentKind::Repeat => {}
        }
        Ok(())
    }

    /// Δ_s = Δ_p/√(2·m_steps), the tomography error budget of this config.
    pub fn delta_s(&self) -> f64 {
        self.delta_p / (2.0 * self.m_steps as f64).sqrt()
    }
}
