//! Shared numerics: stable log-sum-exp, adaptive quadrature, and
//! golden-section minimization.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    /// The adaptive scheme hit its recursion cap before reaching tolerance.
    #[error("quadrature failed to converge on [{a}, {b}] (requested tol {tol:.3e})")]
    QuadratureFailure { a: f64, b: f64, tol: f64 },
}

/// log(Σ exp(x_i)) with max-subtraction.
///
/// Returns `-inf` for an empty slice or when every entry is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    force: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // The forced levels stop a coarse opening grid from "converging" on a
    // narrow feature it has not seen yet.
    if force == 0 && delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let next_force = force.saturating_sub(1);
    let l = adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, next_force)?;
    let r = adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, next_force)?;
    Some(l + r)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<f64, NumericError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, b - a);
    adaptive_step(&f, a, b, fa, fm, fb, whole, abs_tol, 48, 6).ok_or(
        NumericError::QuadratureFailure {
            a,
            b,
            tol: abs_tol,
        },
    )
}

/// Adaptive quadrature over consecutive segments `[p_0, p_1], [p_1, p_2], …`.
///
/// Splitting at caller-chosen breakpoints keeps sharply peaked integrands
/// from being missed by the first coarse Simpson samples.
pub fn integrate_segments<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
) -> Result<f64, NumericError> {
    assert!(breakpoints.len() >= 2, "need at least one segment");
    let per_segment = abs_tol / (breakpoints.len() - 1) as f64;
    let mut total = 0.0;
    for pair in breakpoints.windows(2) {
        total += integrate_adaptive(&f, pair[0], pair[1], per_segment)?;
    }
    Ok(total)
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_min, f_min)` once the bracket is narrower than `x_tol` or
/// `max_iter` shrink steps have run.
pub fn golden_section_min<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Central-difference first derivative with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
