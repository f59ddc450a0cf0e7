//! States, density matrices, observables, Bloch vectors, and projective
//! measurement for fixed small-dimension systems.
//!
//! The storage basis is always the eigenbasis of the measured observable, so
//! POVM elements elsewhere in the crate stay diagonal and no basis-change
//! bookkeeping is needed.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::stream::RandomStream;

/// Norm below which an amplitude vector counts as zero.
const ZERO_NORM: f64 = 1e-14;
/// Tolerance for Hermiticity and unit-trace checks.
const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix may round off to this far below zero.
const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum QcoreError {
    #[error("cannot normalize a zero amplitude vector (norm {norm:.3e})")]
    ZeroVector { norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigenvalues must be pairwise distinct: a[{i}] = a[{j}] = {value}")]
    DegenerateSpectrum { i: usize, j: usize, value: f64 },
    #[error("not a valid density matrix: {reason}")]
    InvalidDensity { reason: String },
}

/// A pure state as complex amplitudes over the observable eigenbasis.
///
/// Construction normalizes, so `Σ|α_i|² = 1` always holds afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amps: Vec<C64>,
}

impl QuantumState {
    /// Normalizes `amps` to a unit vector.
    pub fn new(amps: Vec<C64>) -> Result<Self, QcoreError> {
        if amps.len() < 2 {
            return Err(QcoreError::DimensionMismatch {
                left: amps.len(),
                right: 2,
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm.is_nan() || norm < ZERO_NORM {
            return Err(QcoreError::ZeroVector { norm });
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Qubit `α|↑⟩ + β|↓⟩` (normalized).
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self, QcoreError> {
        Self::new(vec![alpha, beta])
    }

    /// The `i`-th eigenstate of a `dim`-level system.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        assert!(dim >= 2 && i < dim);
        let mut amps = vec![C64::ZERO; dim];
        amps[i] = C64::ONE;
        Self { amps }
    }

    /// Haar-random pure state: iid complex Gaussian amplitudes, normalized.
    pub fn random_pure(dim: usize, rng: &mut RandomStream) -> Self {
        loop {
            let amps: Vec<C64> = (0..dim)
                .map(|_| C64::new(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0)))
                .collect();
            if let Ok(state) = Self::new(amps) {
                return state;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> C64 {
        self.amps[i]
    }

    /// Born weights `|α_i|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<C64, QcoreError> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64, QcoreError> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// The raw projector `|ψ⟩⟨ψ|`.
    pub fn projector_matrix(&self) -> DMatrix<C64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }

    /// `|ψ⟩⟨ψ|` as a validated density matrix.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix(self.projector_matrix())
            .expect("a pure-state projector is always a valid density matrix")
    }

    /// Bloch vector `(⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩)`; qubits only.
    pub fn bloch(&self) -> Result<BlochVector, QcoreError> {
        check_dims(self.dim(), 2)?;
        let a = self.amps[0];
        let b = self.amps[1];
        let cross = a * b.conj();
        Ok(BlochVector {
            sx: cross.re,
            sy: -cross.im,
            sz: 0.5 * (a.norm_sqr() - b.norm_sqr()),
        })
    }
}

/// Normalizes an amplitude vector into a [`QuantumState`].
pub fn make_state(amps: Vec<C64>) -> Result<QuantumState, QcoreError> {
    QuantumState::new(amps)
}

/// A validated density matrix: Hermitian, unit trace, positive within
/// round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-12), unit trace (1e-12), and positivity
    /// (eigenvalues ≥ −1e-10).
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self, QcoreError> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(QcoreError::InvalidDensity {
                reason: format!("shape {}x{} is not square of dim ≥ 2", m.nrows(), m.ncols()),
            });
        }
        let herm_dev = (0..m.nrows())
            .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
            .map(|(i, j)| (m[(i, j)] - m[(j, i)].conj()).norm())
            .fold(0.0, f64::max);
        if herm_dev > DENSITY_TOL {
            return Err(QcoreError::InvalidDensity {
                reason: format!("not Hermitian (max deviation {herm_dev:.3e})"),
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(QcoreError::InvalidDensity {
                reason: format!("trace {tr} is not 1"),
            });
        }
        let min_eig = m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -POSITIVITY_TOL {
            return Err(QcoreError::InvalidDensity {
                reason: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { m })
    }

    /// Probability-weighted mixture `Σ w_k |ψ_k⟩⟨ψ_k|`.
    pub fn mixture(parts: &[(f64, QuantumState)]) -> Result<Self, QcoreError> {
        let dim = parts
            .first()
            .map(|(_, s)| s.dim())
            .ok_or(QcoreError::InvalidDensity {
                reason: "empty mixture".into(),
            })?;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (w, state) in parts {
            check_dims(state.dim(), dim)?;
            m += state.projector_matrix() * C64::new(*w, 0.0);
        }
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    /// Eigenvalues sorted ascending, with round-off negatives clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .m
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .map(|&x| if x < 0.0 { 0.0 } else { x })
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let d = self.dim();
        let mut s = C64::ZERO;
        for i in 0..d {
            for j in 0..d {
                s += self.m[(i, j)] * self.m[(j, i)];
            }
        }
        s.re
    }

    /// `(1/2) Σ |λ_i(ρ − σ)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64, QcoreError> {
        check_dims(self.dim(), other.dim())?;
        let diff = &self.m - &other.m;
        let ev = diff.symmetric_eigen().eigenvalues;
        Ok(0.5 * ev.iter().map(|x| x.abs()).sum::<f64>())
    }
}

/// `tr ρ²`, between 1/d (maximally mixed) and 1 (pure).
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `1 − tr(ρσ)`; zero for identical pure states, one for orthogonal ones.
pub fn distance_measure(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QcoreError> {
    check_dims(rho.dim(), sigma.dim())?;
    let d = rho.dim();
    let mut s = C64::ZERO;
    for i in 0..d {
        for j in 0..d {
            s += rho.element(i, j) * sigma.element(j, i);
        }
    }
    Ok(1.0 - s.re)
}

/// An observable with a discrete non-degenerate spectrum, stored as its
/// eigenvalues in the implicit storage basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    eigenvalues: Vec<f64>,
    labels: Vec<String>,
}

impl Observable {
    pub fn new(eigenvalues: Vec<f64>, labels: Vec<String>) -> Result<Self, QcoreError> {
        if eigenvalues.len() != labels.len() {
            return Err(QcoreError::DimensionMismatch {
                left: eigenvalues.len(),
                right: labels.len(),
            });
        }
        if eigenvalues.len() < 2 {
            return Err(QcoreError::DimensionMismatch {
                left: eigenvalues.len(),
                right: 2,
            });
        }
        for i in 0..eigenvalues.len() {
            for j in (i + 1)..eigenvalues.len() {
                if eigenvalues[i] == eigenvalues[j] {
                    return Err(QcoreError::DegenerateSpectrum {
                        i,
                        j,
                        value: eigenvalues[i],
                    });
                }
            }
        }
        Ok(Self {
            eigenvalues,
            labels,
        })
    }

    /// Eigenvalues with auto-generated labels `a0, a1, …`.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self, QcoreError> {
        let labels = (0..eigenvalues.len()).map(|i| format!("a{i}")).collect();
        Self::new(eigenvalues, labels)
    }

    /// The ±1 qubit observable used throughout the examples.
    pub fn spin_pm() -> Self {
        Self::new(vec![1.0, -1.0], vec!["+".into(), "-".into()]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Smallest gap between distinct eigenvalues.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for i in 0..self.dim() {
            for j in (i + 1)..self.dim() {
                gap = gap.min((self.eigenvalues[i] - self.eigenvalues[j]).abs());
            }
        }
        gap
    }
}

/// `(⟨A⟩_ψ, (ΔA)²_ψ)` in the given state.
pub fn expectation_and_variance(
    state: &QuantumState,
    obs: &Observable,
) -> Result<(f64, f64), QcoreError> {
    check_dims(state.dim(), obs.dim())?;
    let probs = state.probabilities();
    let mean: f64 = probs
        .iter()
        .zip(obs.eigenvalues())
        .map(|(p, a)| p * a)
        .sum();
    let second: f64 = probs
        .iter()
        .zip(obs.eigenvalues())
        .map(|(p, a)| p * a * a)
        .sum();
    Ok((mean, second - mean * mean))
}

/// Projective measurement: draws eigenvalue `a_i` with probability `|α_i|²`
/// and collapses to the i-th eigenstate.
pub fn strong_measure(
    state: &QuantumState,
    obs: &Observable,
    rng: &mut RandomStream,
) -> Result<(f64, QuantumState), QcoreError> {
    check_dims(state.dim(), obs.dim())?;
    let i = rng.pick_weighted(&state.probabilities());
    Ok((
        obs.eigenvalue(i),
        QuantumState::basis_state(state.dim(), i),
    ))
}

/// Qubit spin expectation values `(⟨S_x⟩, ⟨S_y⟩, ⟨S_z⟩)`.
///
/// Pure states sit on the radius-1/2 sphere: `sx² + sy² + sz² = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn norm_sq(&self) -> f64 {
        self.sx * self.sx + self.sy * self.sy + self.sz * self.sz
    }
}

/// Bloch vector of a pure qubit state.
pub fn bloch_vector(state: &QuantumState) -> Result<BlochVector, QcoreError> {
    state.bloch()
}

/// `ρ = I/2 + sx·σ_x + sy·σ_y + sz·σ_z`, validated (requires |s| ≤ 1/2).
pub fn state_from_bloch(b: &BlochVector) -> Result<DensityMatrix, QcoreError> {
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.5 + b.sz, 0.0),
            C64::new(b.sx, -b.sy),
            C64::new(b.sx, b.sy),
            C64::new(0.5 - b.sz, 0.0),
        ],
    );
    DensityMatrix::from_matrix(m)
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<(), QcoreError> {
    if left == right {
        Ok(())
    } else {
        Err(QcoreError::DimensionMismatch { left, right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::RngCore;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn make_state_normalizes() {
        let s = make_state(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(s.amps(), &[C64::ONE, C64::ZERO]);

        let s = make_state(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(s.amp(0).re, r, epsilon = 1e-15);
        assert_relative_eq!(s.amp(1).re, r, epsilon = 1e-15);

        // 3-4-5 triangle with an imaginary second leg.
        let s = make_state(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_relative_eq!(s.amp(0).re, 0.6, epsilon = 1e-15);
        assert_relative_eq!(s.amp(1).im, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn make_state_rejects_zero_vector() {
        assert!(matches!(
            make_state(vec![C64::ZERO, C64::ZERO]),
            Err(QcoreError::ZeroVector { .. })
        ));
    }

    #[test]
    fn unit_norm_invariant_on_random_inputs() {
        let mut rng = RandomStream::new(3);
        for _ in 0..100 {
            let dim = 2 + (rng.next_u64() % 4) as usize;
            let s = QuantumState::random_pure(dim, &mut rng);
            let norm: f64 = s.probabilities().iter().sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn purity_of_pure_states_is_one() {
        let mut rng = RandomStream::new(4);
        for _ in 0..100 {
            let s = QuantumState::random_pure(2, &mut rng);
            assert!((s.density().purity() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn purity_of_decohered_symmetric_qubit() {
        // Post-measurement mixture of |↑⟩ and |↓⟩ at equal weight:
        // tr ρ² = 1 − 2|α|²|β|² = 1/2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::mixture(&[
            (r * r, QuantumState::basis_state(2, 0)),
            (r * r, QuantumState::basis_state(2, 1)),
        ])
        .unwrap();
        assert_relative_eq!(purity(&rho), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn expectation_and_variance_examples() {
        let obs = Observable::spin_pm();

        let eig = QuantumState::basis_state(2, 0);
        let (m, v) = expectation_and_variance(&eig, &obs).unwrap();
        assert_eq!((m, v), (1.0, 0.0));

        let sym = QuantumState::qubit(C64::ONE, C64::ONE).unwrap();
        let (m, v) = expectation_and_variance(&sym, &obs).unwrap();
        assert!(m.abs() < 1e-15);
        assert_relative_eq!(v, 1.0, epsilon = 1e-15);

        // |α|² = 0.36: mean = 0.36 − 0.64 = −0.28, var = 1 − 0.28².
        let s = QuantumState::qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let (m, v) = expectation_and_variance(&s, &obs).unwrap();
        assert_relative_eq!(m, -0.28, epsilon = 1e-15);
        assert_relative_eq!(v, 0.9216, epsilon = 1e-15);
    }

    #[test]
    fn expectation_brute_force_cross_check() {
        let obs = Observable::from_eigenvalues(vec![0.5, -1.5, 2.0]).unwrap();
        let mut rng = RandomStream::new(5);
        for _ in 0..50 {
            let s = QuantumState::random_pure(3, &mut rng);
            let (m, v) = expectation_and_variance(&s, &obs).unwrap();
            let p = s.probabilities();
            let bm: f64 = p.iter().zip(obs.eigenvalues()).map(|(p, a)| p * a).sum();
            let bv: f64 = p
                .iter()
                .zip(obs.eigenvalues())
                .map(|(p, a)| p * (a - bm) * (a - bm))
                .sum();
            assert_relative_eq!(m, bm, epsilon = 1e-14);
            assert_relative_eq!(v, bv, epsilon = 1e-14);
        }
    }

    #[test]
    fn distance_measure_examples() {
        let up = QuantumState::basis_state(2, 0).density();
        let down = QuantumState::basis_state(2, 1).density();
        assert_relative_eq!(distance_measure(&up, &up).unwrap(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(distance_measure(&up, &down).unwrap(), 1.0, epsilon = 1e-15);

        let plus = QuantumState::qubit(C64::ONE, C64::ONE).unwrap().density();
        let mixed = DensityMatrix::mixture(&[
            (0.5, QuantumState::basis_state(2, 0)),
            (0.5, QuantumState::basis_state(2, 1)),
        ])
        .unwrap();
        assert_relative_eq!(
            distance_measure(&plus, &mixed).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn distance_measure_is_symmetric() {
        let mut rng = RandomStream::new(6);
        for _ in 0..20 {
            let a = QuantumState::random_pure(2, &mut rng).density();
            let b = QuantumState::random_pure(2, &mut rng).density();
            let ab = distance_measure(&a, &b).unwrap();
            let ba = distance_measure(&b, &a).unwrap();
            assert_relative_eq!(ab, ba, epsilon = 1e-14);
            assert!((-1e-14..=1.0 + 1e-14).contains(&ab));
        }
    }

    #[test]
    fn strong_measure_collapses_to_eigenstates() {
        let obs = Observable::spin_pm();
        let mut rng = RandomStream::new(7);
        for _ in 0..200 {
            let s = QuantumState::random_pure(2, &mut rng);
            let (a, post) = strong_measure(&s, &obs, &mut rng).unwrap();
            let idx = if a == 1.0 { 0 } else { 1 };
            assert_eq!(post, QuantumState::basis_state(2, idx));
        }
    }

    #[test]
    fn strong_measure_eigenstate_is_fixed_point() {
        let obs = Observable::spin_pm();
        let eig = QuantumState::basis_state(2, 1);
        let mut rng = RandomStream::new(8);
        for _ in 0..50 {
            let (a, post) = strong_measure(&eig, &obs, &mut rng).unwrap();
            assert_eq!(a, -1.0);
            assert_eq!(post, eig);
        }
    }

    #[test]
    fn strong_measure_frequencies_match_born_rule() {
        // |α|² = 0.36 over 1e5 draws: empirical frequency within ±0.005.
        let obs = Observable::spin_pm();
        let s = QuantumState::qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let mut rng = RandomStream::new(20260809);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| strong_measure(&s, &obs, &mut rng).unwrap().0 == 1.0)
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.36).abs() < 0.005, "freq {freq}");
    }

    #[test]
    fn strong_measure_chi_square_at_one_percent() {
        // d = 3 spectrum; chi-square GOF of 1e5 draws at 1% significance
        // (critical value for 2 dof: 9.21).
        let obs = Observable::from_eigenvalues(vec![-1.0, 0.0, 1.0]).unwrap();
        let s = QuantumState::new(vec![
            c(0.2f64.sqrt(), 0.0),
            c(0.3f64.sqrt(), 0.0),
            c(0.5f64.sqrt(), 0.0),
        ])
        .unwrap();
        let mut rng = RandomStream::new(11);
        let n = 100_000usize;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let (a, _) = strong_measure(&s, &obs, &mut rng).unwrap();
            let idx = obs
                .eigenvalues()
                .iter()
                .position(|&x| x == a)
                .unwrap();
            counts[idx] += 1;
        }
        let expected = [0.2 * n as f64, 0.3 * n as f64, 0.5 * n as f64];
        let stat: f64 = counts
            .iter()
            .zip(&expected)
            .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
            .sum();
        assert!(stat < 9.21, "chi-square stat {stat}");
    }

    #[test]
    fn bloch_examples() {
        let up = QuantumState::basis_state(2, 0);
        let b = bloch_vector(&up).unwrap();
        assert_eq!((b.sx, b.sy, b.sz), (0.0, 0.0, 0.5));

        let plus = QuantumState::qubit(C64::ONE, C64::ONE).unwrap();
        let b = bloch_vector(&plus).unwrap();
        assert_relative_eq!(b.sx, 0.5, epsilon = 1e-15);
        assert!(b.sy.abs() < 1e-15 && b.sz.abs() < 1e-15);
    }

    #[test]
    fn bloch_roundtrip_on_random_states() {
        let mut rng = RandomStream::new(12);
        for _ in 0..100 {
            let s = QuantumState::random_pure(2, &mut rng);
            let b = bloch_vector(&s).unwrap();
            assert!((b.norm_sq() - 0.25).abs() < 1e-10, "pure-state norm");
            let rho = state_from_bloch(&b).unwrap();
            let direct = s.density();
            for i in 0..2 {
                for j in 0..2 {
                    assert!((rho.element(i, j) - direct.element(i, j)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bloch_rejects_non_qubits() {
        let s = QuantumState::new(vec![C64::ONE, C64::ZERO, C64::ZERO]).unwrap();
        assert!(matches!(
            bloch_vector(&s),
            Err(QcoreError::DimensionMismatch { left: 3, right: 2 })
        ));
    }

    #[test]
    fn density_validation_catches_bad_matrices() {
        // Trace ≠ 1.
        let m = DMatrix::from_row_slice(2, 2, &[c(0.9, 0.0), C64::ZERO, C64::ZERO, C64::ZERO]);
        assert!(DensityMatrix::from_matrix(m).is_err());
        // Not Hermitian.
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.1, 0.0), c(0.5, 0.0)]);
        assert!(DensityMatrix::from_matrix(m).is_err());
        // Negative eigenvalue (Bloch vector outside the sphere).
        assert!(state_from_bloch(&BlochVector {
            sx: 0.6,
            sy: 0.0,
            sz: 0.0
        })
        .is_err());
    }

    #[test]
    fn degenerate_spectrum_rejected() {
        assert!(matches!(
            Observable::from_eigenvalues(vec![1.0, 1.0]),
            Err(QcoreError::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn trace_distance_basics() {
        let up = QuantumState::basis_state(2, 0).density();
        let down = QuantumState::basis_state(2, 1).density();
        assert_relative_eq!(up.trace_distance(&down).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(up.trace_distance(&up).unwrap(), 0.0, epsilon = 1e-12);
    }
}
