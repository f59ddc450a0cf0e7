//! Weak values, single-weak-value tomography, and weak-value coordinates on
//! the qubit state space.
//!
//! A single complex weak value of the projector P₊ between a pre-selected
//! state and an admissible post-selection |b⟩ determines the state, so
//! `w_z = w₊ − 1/2` is a coordinate chart: a stereographic-type bijection
//! from the plane (plus the point at infinity, where ⟨b|ψ⟩ = 0) onto the
//! Bloch sphere. In these coordinates the line element `dl² = 2 tr dρ dρ`
//! is conformal,
//!
//! ```text
//! dl² = 4|b₊|²|b₋|² (dx² + dy²) / D²,
//! D   = x² + y² + x(|b₋|² − |b₊|²) + 1/4,
//! ```
//!
//! with (x, y) = (Re w_z, Im w_z). The total state-space volume comes out
//! as 4π for every admissible |b⟩, and minimizing the state-averaged error
//! volume of a noisy weak-value measurement over |b⟩ lands on the mutually
//! unbiased point |b₊|² = 1/2.
//!
//! Two routes are kept deliberately independent: [`conformal_factor_analytic`]
//! is the closed form, while [`metric_numeric`] differentiates the
//! reconstruction map itself by central differences. Their agreement is the
//! correctness anchor for everything geometric here.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::numeric::{self, NumericError};
use crate::qcore::{check_dims, QcoreError, QuantumState};
use crate::stream::RandomStream;

/// Overlaps smaller than this count as orthogonal post-selection.
const ORTHOGONAL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("inadmissible post-selection: {reason}")]
    InadmissiblePostSelection { reason: String },
    #[error("post-selection is orthogonal to the state (|⟨b|ψ⟩| = {overlap:.3e})")]
    OrthogonalPostSelection { overlap: f64 },
    #[error("finite-difference step {h:.3e} outside [1e-7, 1e-3]")]
    StepOutOfRange { h: f64 },
    #[error("error budget needs delta_s > 0 and M ≥ 1 (got delta_s {delta_s}, m {m})")]
    InvalidErrorBudget { delta_s: f64, m: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// The post-selected state |b⟩, stored as amplitudes in the (|+⟩, |−⟩)
/// eigenbasis of the measured observable.
///
/// Both components must stay clear of zero: the reconstruction formulas
/// divide by them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelection {
    b_plus: C64,
    b_minus: C64,
}

impl PostSelection {
    pub fn new(b_plus: C64, b_minus: C64) -> Result<Self, TomoError> {
        let norm = (b_plus.norm_sqr() + b_minus.norm_sqr()).sqrt();
        if norm < 1e-14 {
            return Err(TomoError::InadmissiblePostSelection {
                reason: "zero amplitude vector".into(),
            });
        }
        let b_plus = b_plus / norm;
        let b_minus = b_minus / norm;
        if b_plus.norm() <= ORTHOGONAL_TOL || b_minus.norm() <= ORTHOGONAL_TOL {
            return Err(TomoError::InadmissiblePostSelection {
                reason: format!(
                    "both components must be nonzero (|b₊| = {:.3e}, |b₋| = {:.3e})",
                    b_plus.norm(),
                    b_minus.norm()
                ),
            });
        }
        Ok(Self { b_plus, b_minus })
    }

    /// Real positive post-selection from `|b₊|²` alone.
    pub fn from_b_plus_sq(b_plus_sq: f64) -> Result<Self, TomoError> {
        if b_plus_sq.is_nan() || b_plus_sq <= 0.0 || b_plus_sq >= 1.0 {
            return Err(TomoError::InadmissiblePostSelection {
                reason: format!("|b₊|² must lie strictly inside (0, 1), got {b_plus_sq}"),
            });
        }
        Self::new(
            C64::new(b_plus_sq.sqrt(), 0.0),
            C64::new((1.0 - b_plus_sq).sqrt(), 0.0),
        )
    }

    /// The mutually unbiased post-selection |b₊|² = |b₋|² = 1/2.
    pub fn mub() -> Self {
        Self::from_b_plus_sq(0.5).unwrap()
    }

    pub fn b_plus(&self) -> C64 {
        self.b_plus
    }

    pub fn b_minus(&self) -> C64 {
        self.b_minus
    }

    pub fn b_plus_sq(&self) -> f64 {
        self.b_plus.norm_sqr()
    }

    pub fn b_minus_sq(&self) -> f64 {
        self.b_minus.norm_sqr()
    }

    /// `|b₊|²|b₋|²`, the minimum of D over the plane.
    pub fn k(&self) -> f64 {
        self.b_plus_sq() * self.b_minus_sq()
    }

    pub fn as_state(&self) -> QuantumState {
        QuantumState::new(vec![self.b_plus, self.b_minus]).unwrap()
    }
}

/// Which eigenprojector a weak value refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorIndex {
    Plus,
    Minus,
}

/// The complex weak value w₊ of P₊, with w₋ = 1 − w₊ derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakValueCoord {
    w_plus: C64,
}

impl WeakValueCoord {
    pub fn new(w_plus: C64) -> Self {
        Self { w_plus }
    }

    /// From the coordinate `w_z = w₊ − 1/2`.
    pub fn from_w_z(w_z: C64) -> Self {
        Self {
            w_plus: w_z + C64::new(0.5, 0.0),
        }
    }

    pub fn w_plus(&self) -> C64 {
        self.w_plus
    }

    pub fn w_minus(&self) -> C64 {
        C64::ONE - self.w_plus
    }

    pub fn w_z(&self) -> C64 {
        self.w_plus - C64::new(0.5, 0.0)
    }

    /// Re w_z.
    pub fn x(&self) -> f64 {
        self.w_z().re
    }

    /// Im w_z.
    pub fn y(&self) -> f64 {
        self.w_z().im
    }
}

/// `⟨b|P_±|ψ⟩ / ⟨b|ψ⟩`.
///
/// Unbounded as ⟨b|ψ⟩ → 0: that divergence is the point at infinity of the
/// stereographic chart, reported as [`TomoError::OrthogonalPostSelection`].
pub fn weak_value(
    pre: &QuantumState,
    post: &PostSelection,
    which: ProjectorIndex,
) -> Result<C64, TomoError> {
    check_dims(pre.dim(), 2)?;
    let bra_plus = post.b_plus.conj();
    let bra_minus = post.b_minus.conj();
    let denom = bra_plus * pre.amp(0) + bra_minus * pre.amp(1);
    if denom.norm() <= ORTHOGONAL_TOL {
        return Err(TomoError::OrthogonalPostSelection {
            overlap: denom.norm(),
        });
    }
    Ok(match which {
        ProjectorIndex::Plus => bra_plus * pre.amp(0) / denom,
        ProjectorIndex::Minus => bra_minus * pre.amp(1) / denom,
    })
}

/// Both weak values bundled as a coordinate.
pub fn weak_value_coord(
    pre: &QuantumState,
    post: &PostSelection,
) -> Result<WeakValueCoord, TomoError> {
    Ok(WeakValueCoord::new(weak_value(
        pre,
        post,
        ProjectorIndex::Plus,
    )?))
}

/// Inverts the weak value: `α ∝ w₊/⟨b|+⟩, β ∝ w₋/⟨b|−⟩`, normalized.
pub fn reconstruct_state(
    w: &WeakValueCoord,
    post: &PostSelection,
) -> Result<QuantumState, TomoError> {
    let alpha = w.w_plus() / post.b_plus.conj();
    let beta = w.w_minus() / post.b_minus.conj();
    QuantumState::new(vec![alpha, beta]).map_err(TomoError::from)
}

/// State at the chart point `w_z = x + iy`.
pub fn state_at_coords(x: f64, y: f64, post: &PostSelection) -> Result<QuantumState, TomoError> {
    reconstruct_state(&WeakValueCoord::from_w_z(C64::new(x, y)), post)
}

/// The common statistical error Δ_s on Re and Im of a measured weak value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    delta_s: f64,
}

impl ErrorBudget {
    pub fn new(delta_s: f64) -> Result<Self, TomoError> {
        if !delta_s.is_finite() || delta_s <= 0.0 {
            return Err(TomoError::InvalidErrorBudget { delta_s, m: 1 });
        }
        Ok(Self { delta_s })
    }

    pub fn delta_s(&self) -> f64 {
        self.delta_s
    }
}

/// `Δ_s = Δ_p/√(2M)` from the meter width and the repetition count.
pub fn statistical_error(delta_p: f64, m: usize) -> Result<ErrorBudget, TomoError> {
    if !delta_p.is_finite() || delta_p <= 0.0 || m < 1 {
        return Err(TomoError::InvalidErrorBudget { delta_s: delta_p, m });
    }
    ErrorBudget::new(delta_p / (2.0 * m as f64).sqrt())
}

/// Adds independent zero-mean Gaussian noise of width Δ_s to Re and Im of
/// the weak value — the errors are equal and state-independent.
pub fn simulate_weak_value_estimate(
    true_w: &WeakValueCoord,
    budget: &ErrorBudget,
    rng: &mut RandomStream,
) -> WeakValueCoord {
    let noise = C64::new(
        rng.normal(0.0, budget.delta_s),
        rng.normal(0.0, budget.delta_s),
    );
    WeakValueCoord::new(true_w.w_plus() + noise)
}

/// `D(x, y) = x² + y² + x(|b₋|² − |b₊|²) + 1/4`.
///
/// Completing the square gives `D = (x + (|b₋|²−|b₊|²)/2)² + y² + |b₊|²|b₋|²`,
/// so D ≥ |b₊|²|b₋|² > 0 everywhere.
pub fn metric_denominator(x: f64, y: f64, post: &PostSelection) -> f64 {
    x * x + y * y + x * (post.b_minus_sq() - post.b_plus_sq()) + 0.25
}

/// Conformal factor of `dl² = 2 tr dρ dρ` in w_z coordinates:
/// `4|b₊|²|b₋|²/D²`.
pub fn conformal_factor_analytic(x: f64, y: f64, post: &PostSelection) -> f64 {
    let d = metric_denominator(x, y, post);
    4.0 * post.k() / (d * d)
}

/// Metric components extracted by central finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g_xx: f64,
    pub g_yy: f64,
    pub g_xy: f64,
}

impl MetricComponents {
    /// |g_xy| relative to the diagonal scale; ~0 for a conformal chart.
    pub fn conformality_defect(&self) -> f64 {
        self.g_xy.abs() / self.g_xx.abs().max(self.g_yy.abs())
    }
}

/// Numerical metric of `dl² = 2 tr dρ dρ` at a chart point, by central
/// differences of the reconstruction map with step `h ∈ [1e-7, 1e-3]`.
pub fn metric_numeric(
    w: &WeakValueCoord,
    post: &PostSelection,
    h: f64,
) -> Result<MetricComponents, TomoError> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(TomoError::StepOutOfRange { h });
    }
    let (x, y) = (w.x(), w.y());
    let rho = |x: f64, y: f64| -> Result<nalgebra::DMatrix<C64>, TomoError> {
        Ok(state_at_coords(x, y, post)?.projector_matrix())
    };
    let scale = C64::new(0.5 / h, 0.0);
    let drho_dx = (rho(x + h, y)? - rho(x - h, y)?) * scale;
    let drho_dy = (rho(x, y + h)? - rho(x, y - h)?) * scale;
    let pair = |a: &nalgebra::DMatrix<C64>, b: &nalgebra::DMatrix<C64>| -> f64 {
        2.0 * (a * b).trace().re
    };
    Ok(MetricComponents {
        g_xx: pair(&drho_dx, &drho_dx),
        g_yy: pair(&drho_dy, &drho_dy),
        g_xy: pair(&drho_dx, &drho_dy),
    })
}

/// Integrates `f` over the plane in polar coordinates around the centroid of
/// D, with an exact analytic tail beyond the cutoff radius.
///
/// `tail(r)` must return the exact integral of `f` outside radius `r` (the
/// integrands here are radially symmetric about the centroid, with
/// closed-form tails).
fn plane_integral(
    f: impl Fn(f64, f64) -> f64,
    post: &PostSelection,
    r_max: f64,
    abs_tol: f64,
    tail: impl Fn(f64) -> f64,
) -> Result<f64, NumericError> {
    let cx = 0.5 * (post.b_plus_sq() - post.b_minus_sq());
    let cy = 0.0;
    const THETA_PANELS: usize = 64;
    let h = 2.0 * std::f64::consts::PI / THETA_PANELS as f64;
    let ring = |r: f64| -> f64 {
        // Composite Simpson over the angle; the integrand is smooth and
        // 2π-periodic.
        let mut acc = 0.0;
        for k in 0..=THETA_PANELS {
            let theta = k as f64 * h;
            let v = f(cx + r * theta.cos(), cy + r * theta.sin());
            let weight = if k == 0 || k == THETA_PANELS {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * v;
        }
        acc * h / 3.0 * r
    };
    let breaks = [0.0, 0.1, 1.0, 10.0, 100.0, r_max];
    let body = numeric::integrate_segments(ring, &breaks, abs_tol)?;
    Ok(body + tail(r_max))
}

/// Total volume of the qubit state space in the weak-value chart,
/// `∫ λ dx dy`, by 2-D quadrature plus the exact tail. Comes out as 4π for
/// every admissible post-selection.
pub fn total_volume(post: &PostSelection) -> Result<f64, TomoError> {
    let k = post.k();
    let v = plane_integral(
        |x, y| conformal_factor_analytic(x, y, post),
        post,
        1e4,
        1e-6,
        // ∫_R^∞ 4k/(r²+k)² 2πr dr = 4πk/(R²+k).
        |r| 4.0 * std::f64::consts::PI * k / (r * r + k),
    )?;
    Ok(v)
}

/// State-averaged error volume of a noisy weak-value measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorVolume {
    /// Quadrature value: the Δ_s² error box mapped through the metric,
    /// averaged over the normalized state-space measure λ dx dy / 4π.
    pub state_averaged: f64,
    /// The closed form `16Δ_s²/(|b₊|²|b₋|²)` kept for comparison; it shares
    /// the 1/(|b₊|²|b₋|²) dependence but carries a different prefactor than
    /// the measure convention used for `state_averaged`.
    pub closed_form_reference: f64,
    /// `state_averaged · |b₊|²|b₋|² / Δ_s²` — the measured prefactor of the
    /// 1/(|b₊|²|b₋|²) law.
    pub measured_prefactor: f64,
}

/// Computes the state-averaged error volume
/// `⟨err⟩ = (1/4π) ∫ (4Δ_s² λ) λ dx dy = (Δ_s²/π) ∫ λ² dx dy`
/// by quadrature, alongside the `16Δ_s²/k` reference form.
pub fn averaged_error_volume(
    post: &PostSelection,
    budget: &ErrorBudget,
) -> Result<ErrorVolume, TomoError> {
    let k = post.k();
    let lambda_sq_integral = plane_integral(
        |x, y| conformal_factor_analytic(x, y, post).powi(2),
        post,
        1e4,
        1e-6,
        // ∫_R^∞ 16k²/(r²+k)⁴ 2πr dr = 16πk²/(3(R²+k)³).
        |r| 16.0 * std::f64::consts::PI * k * k / (3.0 * (r * r + k).powi(3)),
    )?;
    let ds2 = budget.delta_s * budget.delta_s;
    let state_averaged = ds2 / std::f64::consts::PI * lambda_sq_integral;
    Ok(ErrorVolume {
        state_averaged,
        closed_form_reference: 16.0 * ds2 / k,
        measured_prefactor: state_averaged * k / ds2,
    })
}

/// Minimizes the state-averaged error volume over `|b₊|² ∈ (0, 1)` by a
/// coarse grid followed by golden-section search. Returns the argmin, which
/// sits at the mutually unbiased point 1/2.
pub fn optimize_postselection(budget: &ErrorBudget) -> Result<f64, TomoError> {
    let objective = |t: f64| -> f64 {
        let post = PostSelection::from_b_plus_sq(t).expect("grid stays inside (0, 1)");
        averaged_error_volume(&post, budget)
            .expect("quadrature converges on the smooth objective")
            .state_averaged
    };
    let mut best_t = 0.5;
    let mut best_v = f64::INFINITY;
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        let v = objective(t);
        if v < best_v {
            best_v = v;
            best_t = t;
        }
    }
    let lo = (best_t - 0.1).max(0.02);
    let hi = (best_t + 0.1).min(0.98);
    let (argmin, _) = numeric::golden_section_min(objective, lo, hi, 1e-6, 120);
    Ok(argmin)
}

/// Exact infidelity between the states at two chart points:
/// `1 − F = |b₊|²|b₋|² |w₁ − w₂|² / (D(w₁) D(w₂))`.
///
/// Zero only for coinciding coordinates, which is the injectivity of the
/// chart in quantitative form.
pub fn infidelity_between_coords(w1: C64, w2: C64, post: &PostSelection) -> f64 {
    let d1 = metric_denominator(w1.re, w1.im, post);
    let d2 = metric_denominator(w2.re, w2.im, post);
    post.k() * (w1 - w2).norm_sqr() / (d1 * d2)
}
