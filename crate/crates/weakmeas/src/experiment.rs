//! Experiment dispatch.
//!
//! Every experiment is a pure function of its validated config: Monte Carlo
//! draws come from per-index substreams, aggregation is index-ordered, and
//! each result document embeds the config, the closed-form reference values,
//! and the Monte Carlo estimates side by side, so downstream consumers never
//! re-derive physics.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::idealized::{self, IdealizedApparatus};
use crate::lg::{self, LGPlan};
use crate::mc;
use crate::meter::{self, GaussianMeter};
use crate::numeric;
use crate::qcore::{expectation_and_variance, QuantumState};
use crate::sequential;
use crate::stats::{self, GofResult, StatSummary};
use crate::stream::RandomStream;
use crate::tomo::{self, ErrorBudget, PostSelection};

/// Repetitions used for the LG standard-error validation.
const LG_REPETITIONS: usize = 200;
/// Per-step trace rows are embedded only up to this many total rows.
const TRACE_ROW_CAP: usize = 200_000;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// CLI exit code: 2 config, 3 numerical, 1 everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) => 3,
            Self::Internal(_) | Self::Io(_) => 1,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> RunError {
    RunError::Internal(e.to_string())
}

fn numerical(e: impl std::fmt::Display) -> RunError {
    RunError::Numerical(e.to_string())
}

/// Complex matrix as nested `[re, im]` pairs for serialization.
pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

fn matrix_doc(m: &DMatrix<C64>) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Top-level result document: config in, estimates and references out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    pub config: ExperimentConfig,
    pub results: ExperimentResults,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentResults {
    MeterCheck(MeterCheckResults),
    Idealized(IdealizedResults),
    Repeat(RepeatResults),
    Lg(LgResults),
    TomoOptimize(TomoOptimizeResults),
    TomoRoundtrip(TomoRoundtripResults),
}

// ---------------------------------------------------------------------------
// meter-check

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeterCheckClosedForm {
    pub mean: f64,
    pub variance: f64,
    /// ∫ (M_p)ᵢᵢ² dp per eigenvalue; 1 exactly when the POVM is complete.
    pub povm_completeness: Vec<f64>,
    /// ∫ pdf dp; 1 exactly.
    pub pdf_normalization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeterCheckResults {
    pub closed_form: MeterCheckClosedForm,
    pub summary: StatSummary,
    /// Expected counts per histogram bin under the closed-form density.
    pub histogram_expected: Vec<f64>,
}

fn run_meter_check(cfg: &ExperimentConfig) -> Result<MeterCheckResults, RunError> {
    let state = cfg.quantum_state()?;
    let obs = cfg.observable()?;
    let gauge = GaussianMeter::new(cfg.delta_p).map_err(internal)?;

    let (mean, variance) = meter::outcome_moments(&gauge, &state, &obs).map_err(internal)?;
    let breaks = meter::quadrature_breakpoints(&gauge, &obs);
    let povm_completeness: Vec<f64> = (0..obs.dim())
        .map(|i| {
            numeric::integrate_segments(
                |p| meter::povm_element(&gauge, &obs, p)[i].powi(2),
                &breaks,
                1e-10,
            )
        })
        .collect::<Result<_, _>>()
        .map_err(numerical)?;
    let pdf_normalization = numeric::integrate_segments(
        |p| meter::outcome_pdf(&gauge, &state, &obs, p).unwrap_or(0.0),
        &breaks,
        1e-10,
    )
    .map_err(numerical)?;

    let samples = mc::run_indexed(cfg.realizations, cfg.seed, |_, rng| {
        meter::sample_outcome(&gauge, &state, &obs, rng).expect("validated inputs")
    });

    let sigma = cfg.delta_p / std::f64::consts::SQRT_2;
    let probs = state.probabilities();
    let evs = obs.eigenvalues().to_vec();
    let cdf = move |x: f64| -> f64 {
        evs.iter()
            .zip(&probs)
            .map(|(&a, &w)| w * Normal::new(a, sigma).unwrap().cdf(x))
            .sum()
    };
    let summary = stats::summarize(&samples, Some(&cdf));
    let n = samples.len() as f64;
    let histogram_expected = (0..summary.histogram.n_bins())
        .map(|i| n * (cdf(summary.histogram.edges[i + 1]) - cdf(summary.histogram.edges[i])))
        .collect();

    Ok(MeterCheckResults {
        closed_form: MeterCheckClosedForm {
            mean,
            variance,
            povm_completeness,
            pdf_normalization,
        },
        summary,
        histogram_expected,
    })
}

// ---------------------------------------------------------------------------
// idealized

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealizedClosedForm {
    pub middle_band_probability: f64,
    pub purity_exact: f64,
    pub purity_leading_order: f64,
    /// Off-diagonal damping 1 − 2/N of the reduced density matrix.
    pub off_diagonal_scale: f64,
    pub pre_mean: f64,
    pub post_mean: f64,
    pub pre_var: f64,
    pub post_var: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealizedEstimates {
    pub sample_mean: f64,
    pub sample_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealizedRow {
    pub index: usize,
    pub probability: f64,
    pub mc_count: u64,
    pub mc_frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealizedResults {
    pub closed_form: IdealizedClosedForm,
    pub estimates: IdealizedEstimates,
    pub rows: Vec<IdealizedRow>,
    pub gof: GofResult,
}

fn run_idealized(cfg: &ExperimentConfig) -> Result<IdealizedResults, RunError> {
    let state = cfg.quantum_state()?;
    let app = IdealizedApparatus::new(cfg.m_steps).map_err(internal)?;

    let dist = idealized::outcome_distribution(&app, &state).map_err(internal)?;
    let stats_cf = idealized::pointer_stats(&app, &state).map_err(internal)?;
    let n = app.n_slots() as f64;

    let draws = mc::run_indexed(cfg.realizations, cfg.seed, |_, rng| {
        idealized::sample_outcome(&app, &state, rng).expect("validated inputs")
    });
    let mut counts = vec![0u64; app.n_outcomes()];
    for &i in &draws {
        counts[i] += 1;
    }
    let total = cfg.realizations as f64;
    let sample_mean = draws.iter().map(|&i| i as f64).sum::<f64>() / total;
    let sample_variance = draws
        .iter()
        .map(|&i| (i as f64 - sample_mean).powi(2))
        .sum::<f64>()
        / (total - 1.0);

    let rows: Vec<IdealizedRow> = dist
        .iter()
        .enumerate()
        .map(|(index, &probability)| IdealizedRow {
            index,
            probability,
            mc_count: counts[index],
            mc_frequency: counts[index] as f64 / total,
        })
        .collect();
    let gof = stats::chi_square_counts(&counts, &dist);

    Ok(IdealizedResults {
        closed_form: IdealizedClosedForm {
            middle_band_probability: 1.0 - 2.0 / n,
            purity_exact: idealized::purity_weak(&app, &state).map_err(internal)?,
            purity_leading_order: idealized::purity_weak_leading_order(&app, &state)
                .map_err(internal)?,
            off_diagonal_scale: 1.0 - 2.0 / n,
            pre_mean: stats_cf.pre_mean,
            post_mean: stats_cf.post_mean,
            pre_var: stats_cf.pre_var,
            post_var: stats_cf.post_var,
        },
        estimates: IdealizedEstimates {
            sample_mean,
            sample_variance,
        },
        rows,
        gof,
    })
}

// ---------------------------------------------------------------------------
// repeat

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatClosedForm {
    /// ε = Δ_p/√(2M).
    pub epsilon: f64,
    pub error_disturbance: f64,
    pub born_weights: Vec<f64>,
    /// Width of each y_M mixture component, Δ_p/√(2M).
    pub ymean_component_sigma: f64,
    pub average_reduced_density: MatrixDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatEstimates {
    /// Fraction of realizations whose y_M lies nearest each eigenvalue.
    pub fraction_nearest: Vec<f64>,
    /// Fraction of final states within trace distance 0.01 of an eigenstate.
    pub fraction_converged: f64,
    pub mean_final_density: MatrixDoc,
    /// Elementwise max |MC − closed form| of the averaged density.
    pub max_density_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatRealizationRow {
    pub realization: usize,
    pub y_mean: f64,
    pub nearest_eigenvalue_index: usize,
    pub trace_distance_to_nearest: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub realization: usize,
    pub step: usize,
    pub outcome: f64,
    pub y_running: f64,
    pub fidelity_to_initial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatResults {
    pub closed_form: RepeatClosedForm,
    pub estimates: RepeatEstimates,
    pub ymean_summary: StatSummary,
    pub ymean_histogram_expected: Vec<f64>,
    pub realization_rows: Vec<RepeatRealizationRow>,
    /// Per-step rows, populated only when realizations × m_steps stays
    /// within the embedding cap.
    pub trace_rows: Vec<TraceRow>,
}

struct RepeatWorkerOut {
    y_mean: f64,
    nearest: usize,
    trace_dist: f64,
    projector: DMatrix<C64>,
    trace: Vec<(f64, f64, f64)>,
}

fn run_repeat(cfg: &ExperimentConfig) -> Result<RepeatResults, RunError> {
    let state = cfg.quantum_state()?;
    let obs = cfg.observable()?;
    let gauge = GaussianMeter::new(cfg.delta_p).map_err(internal)?;
    let m = cfg.m_steps;
    let keep_traces = cfg
        .realizations
        .checked_mul(m)
        .map(|total| total <= TRACE_ROW_CAP)
        .unwrap_or(false);

    let eigenvalues = obs.eigenvalues().to_vec();
    let outs: Vec<RepeatWorkerOut> = mc::run_indexed(cfg.realizations, cfg.seed, |_, rng| {
        let trace =
            sequential::run_realization(&gauge, &obs, &state, m, rng).expect("validated inputs");
        let y = trace.y_mean();
        let nearest = eigenvalues
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (y - **a).abs().partial_cmp(&(y - **b).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        let final_probs = trace.final_state().probabilities();
        let max_p = final_probs.iter().cloned().fold(0.0, f64::max);
        let trace_dist = (1.0 - max_p).max(0.0).sqrt();
        let rows = if keep_traces {
            let mut running = 0.0;
            trace
                .record()
                .outcomes()
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    running += p;
                    let fid = trace.states()[k + 1].fidelity(&state).expect("same dim");
                    (p, running / (k + 1) as f64, fid)
                })
                .collect()
        } else {
            Vec::new()
        };
        RepeatWorkerOut {
            y_mean: y,
            nearest,
            trace_dist,
            projector: trace.final_state().projector_matrix(),
            trace: rows,
        }
    });

    let total = cfg.realizations as f64;
    let mut fraction_nearest = vec![0.0; obs.dim()];
    let mut converged = 0usize;
    let mut mean_proj = DMatrix::<C64>::zeros(state.dim(), state.dim());
    for out in &outs {
        fraction_nearest[out.nearest] += 1.0 / total;
        if out.trace_dist < 0.01 {
            converged += 1;
        }
        mean_proj += &out.projector;
    }
    mean_proj /= C64::new(total, 0.0);

    let closed_avg = sequential::average_reduced_density(&gauge, &obs, &state, m)
        .map_err(internal)?;
    let max_density_deviation = (0..state.dim())
        .flat_map(|i| (0..state.dim()).map(move |j| (i, j)))
        .map(|(i, j)| (mean_proj[(i, j)] - closed_avg.element(i, j)).norm())
        .fold(0.0, f64::max);

    let y_means: Vec<f64> = outs.iter().map(|o| o.y_mean).collect();
    let sigma = cfg.delta_p / (2.0 * m as f64).sqrt();
    let probs = state.probabilities();
    let evs = obs.eigenvalues().to_vec();
    let cdf = move |x: f64| -> f64 {
        evs.iter()
            .zip(&probs)
            .map(|(&a, &w)| w * Normal::new(a, sigma).unwrap().cdf(x))
            .sum()
    };
    let ymean_summary = stats::summarize(&y_means, Some(&cdf));
    let n = y_means.len() as f64;
    let ymean_histogram_expected = (0..ymean_summary.histogram.n_bins())
        .map(|i| {
            n * (cdf(ymean_summary.histogram.edges[i + 1])
                - cdf(ymean_summary.histogram.edges[i]))
        })
        .collect();

    let realization_rows: Vec<RepeatRealizationRow> = outs
        .iter()
        .enumerate()
        .map(|(realization, o)| RepeatRealizationRow {
            realization,
            y_mean: o.y_mean,
            nearest_eigenvalue_index: o.nearest,
            trace_distance_to_nearest: o.trace_dist,
        })
        .collect();
    let trace_rows: Vec<TraceRow> = outs
        .iter()
        .enumerate()
        .flat_map(|(realization, o)| {
            o.trace
                .iter()
                .enumerate()
                .map(move |(k, &(outcome, y_running, fidelity))| TraceRow {
                    realization,
                    step: k + 1,
                    outcome,
                    y_running,
                    fidelity_to_initial: fidelity,
                })
        })
        .collect();

    Ok(RepeatResults {
        closed_form: RepeatClosedForm {
            epsilon: sequential::epsilon(cfg.delta_p, m),
            error_disturbance: sequential::error_disturbance(
                &state,
                &obs,
                sequential::epsilon(cfg.delta_p, m),
            )
            .map_err(internal)?,
            born_weights: state.probabilities(),
            ymean_component_sigma: sigma,
            average_reduced_density: matrix_doc(closed_avg.matrix()),
        },
        estimates: RepeatEstimates {
            fraction_nearest,
            fraction_converged: converged as f64 / total,
            mean_final_density: matrix_doc(&mean_proj),
            max_density_deviation,
        },
        ymean_summary,
        ymean_histogram_expected,
        realization_rows,
        trace_rows,
    })
}

// ---------------------------------------------------------------------------
// lg

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LgClosedForm {
    pub delta_a: f64,
    pub weak_error: f64,
    pub exact_weak_error: f64,
    pub strong_equivalent_ensemble: f64,
    pub total_strong_budget: f64,
    pub strong_copies_needed: u64,
    pub advantage_ratio: f64,
    pub strong_wins: bool,
    pub weak_state_bias_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LgEstimates {
    pub repetitions: usize,
    pub subensemble_size: usize,
    pub empirical_standard_error: f64,
    pub ratio_to_weak_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LgResults {
    pub closed_form: LgClosedForm,
    pub estimates: LgEstimates,
    pub repetition_means: Vec<f64>,
}

fn run_lg(cfg: &ExperimentConfig) -> Result<LgResults, RunError> {
    let state = cfg.quantum_state()?;
    let obs = cfg.observable()?;
    let (_, var) = expectation_and_variance(&state, &obs).map_err(internal)?;
    let delta_a = var.sqrt();
    let plan = LGPlan::new(cfg.realizations as u64, cfg.delta_p, delta_a).map_err(internal)?;
    let report = lg::compare(&plan);

    let gauge = GaussianMeter::new(cfg.delta_p).map_err(internal)?;
    let copies = (cfg.realizations / 4).max(1);
    let repetition_means = mc::run_indexed(LG_REPETITIONS, cfg.seed, |_, rng| {
        (0..copies)
            .map(|_| meter::sample_outcome(&gauge, &state, &obs, rng).expect("validated inputs"))
            .sum::<f64>()
            / copies as f64
    });
    let grand = repetition_means.iter().sum::<f64>() / LG_REPETITIONS as f64;
    let empirical_standard_error = (repetition_means
        .iter()
        .map(|m| (m - grand).powi(2))
        .sum::<f64>()
        / (LG_REPETITIONS - 1) as f64)
        .sqrt();

    Ok(LgResults {
        closed_form: LgClosedForm {
            delta_a,
            weak_error: report.weak_error,
            exact_weak_error: report.exact_weak_error,
            strong_equivalent_ensemble: report.strong_equivalent_ensemble,
            total_strong_budget: report.total_strong_budget,
            strong_copies_needed: report.strong_copies_needed,
            advantage_ratio: report.advantage_ratio,
            strong_wins: report.strong_wins,
            weak_state_bias_warning: report.weak_state_bias_warning,
        },
        estimates: LgEstimates {
            repetitions: LG_REPETITIONS,
            subensemble_size: copies,
            empirical_standard_error,
            ratio_to_weak_error: empirical_standard_error / report.weak_error,
        },
        repetition_means,
    })
}

// ---------------------------------------------------------------------------
// tomo-optimize

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoOptimizeClosedForm {
    pub delta_s: f64,
    /// The mutually unbiased optimum |b₊|² = 1/2.
    pub argmin: f64,
    /// Reference prefactor of the 1/(|b₊|²|b₋|²) law.
    pub reference_prefactor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoOptimizeEstimates {
    pub argmin: f64,
    pub objective_at_argmin: f64,
    pub measured_prefactor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoGridRow {
    pub b_plus_sq: f64,
    pub objective: f64,
    pub closed_form_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoOptimizeResults {
    pub closed_form: TomoOptimizeClosedForm,
    pub estimates: TomoOptimizeEstimates,
    pub grid: Vec<TomoGridRow>,
}

fn run_tomo_optimize(cfg: &ExperimentConfig) -> Result<TomoOptimizeResults, RunError> {
    let budget = tomo::statistical_error(cfg.delta_p, cfg.m_steps).map_err(internal)?;
    let argmin = tomo::optimize_postselection(&budget).map_err(numerical)?;

    let grid: Vec<TomoGridRow> = (1..=19)
        .map(|i| {
            let t = i as f64 / 20.0;
            let post = PostSelection::from_b_plus_sq(t).map_err(internal)?;
            let vol = tomo::averaged_error_volume(&post, &budget).map_err(numerical)?;
            Ok(TomoGridRow {
                b_plus_sq: t,
                objective: vol.state_averaged,
                closed_form_reference: vol.closed_form_reference,
            })
        })
        .collect::<Result<_, RunError>>()?;

    let at_argmin = tomo::averaged_error_volume(
        &PostSelection::from_b_plus_sq(argmin).map_err(internal)?,
        &budget,
    )
    .map_err(numerical)?;

    Ok(TomoOptimizeResults {
        closed_form: TomoOptimizeClosedForm {
            delta_s: budget.delta_s(),
            argmin: 0.5,
            reference_prefactor: 16.0,
        },
        estimates: TomoOptimizeEstimates {
            argmin,
            objective_at_argmin: at_argmin.state_averaged,
            measured_prefactor: at_argmin.measured_prefactor,
        },
        grid,
    })
}

// ---------------------------------------------------------------------------
// tomo-roundtrip

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoRoundtripClosedForm {
    pub delta_s: f64,
    pub b_plus_sq: f64,
    pub expected_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoRoundtripEstimates {
    pub max_noiseless_infidelity: f64,
    pub mean_noisy_infidelity: f64,
    /// log-log slope of the mean infidelity over Δ_s × {0.3, 1, 3}.
    pub infidelity_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoTrialRow {
    pub trial: usize,
    pub infidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomoRoundtripResults {
    pub closed_form: TomoRoundtripClosedForm,
    pub estimates: TomoRoundtripEstimates,
    pub trial_rows: Vec<TomoTrialRow>,
}

fn run_tomo_roundtrip(cfg: &ExperimentConfig) -> Result<TomoRoundtripResults, RunError> {
    let configured_state = cfg.quantum_state()?;
    let b_plus_sq = cfg.b_plus_sq.unwrap_or(0.5);
    let post = PostSelection::from_b_plus_sq(b_plus_sq).map_err(internal)?;
    let delta_s = cfg.delta_s();

    // Trial 0 uses the configured state; the rest draw Haar-random states,
    // skipping the measure-zero orthogonal corner.
    let state_for_trial = |trial: usize, rng: &mut RandomStream| -> QuantumState {
        if trial == 0 {
            configured_state.clone()
        } else {
            loop {
                let s = QuantumState::random_pure(2, rng);
                if tomo::weak_value_coord(&s, &post).is_ok() {
                    return s;
                }
            }
        }
    };

    // One pass per noise scale; scale 1.0 also carries the noiseless check.
    let scales = [0.3, 1.0, 3.0];
    let mut mean_by_scale = [0.0f64; 3];
    let mut max_noiseless: f64 = 0.0;
    let mut trial_rows = Vec::new();
    for (k, scale) in scales.iter().enumerate() {
        let budget = ErrorBudget::new(scale * delta_s).map_err(internal)?;
        // Distinct substream block per scale keeps the passes independent.
        let offset = (k * cfg.realizations) as u64;
        let outs: Vec<(f64, f64)> = mc::run_indexed(cfg.realizations, cfg.seed, |i, _| {
            let mut rng = crate::stream::derive_stream(cfg.seed, offset + i as u64 + 1);
            let state = state_for_trial(i, &mut rng);
            let truth = tomo::weak_value_coord(&state, &post).expect("admissible by construction");
            let noiseless = tomo::reconstruct_state(&truth, &post)
                .expect("admissible")
                .fidelity(&state)
                .expect("qubit");
            let est = tomo::simulate_weak_value_estimate(&truth, &budget, &mut rng);
            let noisy = tomo::reconstruct_state(&est, &post)
                .expect("admissible")
                .fidelity(&state)
                .expect("qubit");
            (1.0 - noiseless, 1.0 - noisy)
        });
        mean_by_scale[k] =
            outs.iter().map(|(_, noisy)| noisy).sum::<f64>() / cfg.realizations as f64;
        if (*scale - 1.0).abs() < 1e-12 {
            max_noiseless = outs
                .iter()
                .map(|(clean, _)| *clean)
                .fold(0.0, f64::max);
            trial_rows = outs
                .iter()
                .enumerate()
                .map(|(trial, (_, noisy))| TomoTrialRow {
                    trial,
                    infidelity: *noisy,
                })
                .collect();
        }
    }
    let infidelity_slope =
        (mean_by_scale[2].ln() - mean_by_scale[0].ln()) / (scales[2].ln() - scales[0].ln());

    Ok(TomoRoundtripResults {
        closed_form: TomoRoundtripClosedForm {
            delta_s,
            b_plus_sq,
            expected_slope: 2.0,
        },
        estimates: TomoRoundtripEstimates {
            max_noiseless_infidelity: max_noiseless,
            mean_noisy_infidelity: mean_by_scale[1],
            infidelity_slope,
        },
        trial_rows,
    })
}

// ---------------------------------------------------------------------------

/// Runs the configured experiment. Deterministic for a fixed config,
/// including the seed, regardless of worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultDocument, RunError> {
    cfg.validate()?;
    let results = match cfg.experiment {
        ExperimentKind::MeterCheck => ExperimentResults::MeterCheck(run_meter_check(cfg)?),
        ExperimentKind::Idealized => ExperimentResults::Idealized(run_idealized(cfg)?),
        ExperimentKind::Repeat => ExperimentResults::Repeat(run_repeat(cfg)?),
        ExperimentKind::Lg => ExperimentResults::Lg(run_lg(cfg)?),
        ExperimentKind::TomoOptimize => ExperimentResults::TomoOptimize(run_tomo_optimize(cfg)?),
        ExperimentKind::TomoRoundtrip => {
            ExperimentResults::TomoRoundtrip(run_tomo_roundtrip(cfg)?)
        }
    };
    Ok(ResultDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        results,
    })
}
