//! The exactly solvable N-slot pointer apparatus for a qubit.
//!
//! The apparatus starts in a uniform superposition of pointer slots 1…N with
//! no relative phases. The measurement interaction shifts the pointer up one
//! slot for |↑⟩ and down one for |↓⟩, so outcomes range over 0…N+1:
//!
//! - middle band 2 ≤ i ≤ N−1: probability 1/N each, system untouched and the
//!   outcome carries zero information;
//! - top band i ∈ {N, N+1}: probability |α|²/N each, system collapses to |↑⟩;
//! - bottom band i ∈ {0, 1}: probability |β|²/N each, system collapses to |↓⟩.
//!
//! Everything here has a closed form, which makes the module the cheapest
//! end-to-end check of the weak-measurement bookkeeping used elsewhere.

use thiserror::Error;

use crate::qcore::{DensityMatrix, QcoreError, QuantumState};
use crate::stream::RandomStream;

#[derive(Debug, Error)]
pub enum IdealizedError {
    #[error("the apparatus needs at least 3 slots (got {n})")]
    TooFewSlots { n: usize },
    #[error("pointer outcome {index} has zero probability for this state")]
    ImpossibleOutcome { index: usize },
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// An N-slot uniform pointer superposition; outcomes span 0…N+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdealizedApparatus {
    n_slots: usize,
}

impl IdealizedApparatus {
    /// N ≥ 3 keeps the information-free middle band nonempty.
    pub fn new(n_slots: usize) -> Result<Self, IdealizedError> {
        if n_slots < 3 {
            return Err(IdealizedError::TooFewSlots { n: n_slots });
        }
        Ok(Self { n_slots })
    }

    pub fn n_slots(&self) -> usize {
        self.n_slots
    }

    /// Number of distinct pointer outcomes, N + 2.
    pub fn n_outcomes(&self) -> usize {
        self.n_slots + 2
    }
}

fn check_qubit(state: &QuantumState) -> Result<(f64, f64), IdealizedError> {
    crate::qcore::check_dims(state.dim(), 2)?;
    let p = state.probabilities();
    Ok((p[0], p[1]))
}

/// Pointer outcome probabilities as a dense table over indices 0…N+1.
pub fn outcome_distribution(
    app: &IdealizedApparatus,
    state: &QuantumState,
) -> Result<Vec<f64>, IdealizedError> {
    let (pa, pb) = check_qubit(state)?;
    let n = app.n_slots as f64;
    let mut dist = vec![1.0 / n; app.n_outcomes()];
    dist[0] = pb / n;
    dist[1] = pb / n;
    dist[app.n_slots] = pa / n;
    dist[app.n_slots + 1] = pa / n;
    Ok(dist)
}

/// State conditioned on pointer outcome `i`: unchanged in the middle band,
/// |↑⟩ in the top band, |↓⟩ in the bottom band.
pub fn post_state_given_outcome(
    app: &IdealizedApparatus,
    state: &QuantumState,
    i: usize,
) -> Result<QuantumState, IdealizedError> {
    let (pa, pb) = check_qubit(state)?;
    if i >= app.n_outcomes() {
        return Err(IdealizedError::ImpossibleOutcome { index: i });
    }
    if i >= app.n_slots {
        if pa == 0.0 {
            return Err(IdealizedError::ImpossibleOutcome { index: i });
        }
        Ok(QuantumState::basis_state(2, 0))
    } else if i <= 1 {
        if pb == 0.0 {
            return Err(IdealizedError::ImpossibleOutcome { index: i });
        }
        Ok(QuantumState::basis_state(2, 1))
    } else {
        Ok(state.clone())
    }
}

/// Outcome-averaged post-measurement density matrix:
/// `|ψ⟩⟨ψ| − (2/N)(αβ*|↑⟩⟨↓| + α*β|↓⟩⟨↑|)`.
pub fn reduced_density(
    app: &IdealizedApparatus,
    state: &QuantumState,
) -> Result<DensityMatrix, IdealizedError> {
    check_qubit(state)?;
    let n = app.n_slots as f64;
    let mut m = state.projector_matrix();
    let damp = 1.0 - 2.0 / n;
    m[(0, 1)] *= damp;
    m[(1, 0)] *= damp;
    Ok(DensityMatrix::from_matrix(m)?)
}

/// Exact purity of [`reduced_density`]:
/// `1 − (8/N)|α|²|β|²(1 − 1/N)`.
pub fn purity_weak(app: &IdealizedApparatus, state: &QuantumState) -> Result<f64, IdealizedError> {
    let (pa, pb) = check_qubit(state)?;
    let n = app.n_slots as f64;
    Ok(1.0 - (8.0 / n) * pa * pb * (1.0 - 1.0 / n))
}

/// Leading-order purity `1 − (8/N)|α|²|β|²`, dropping the O(1/N²) term.
///
/// [`purity_weak`] is the exact value; this form is kept as a diagnostic for
/// the large-N regime where the two agree.
pub fn purity_weak_leading_order(
    app: &IdealizedApparatus,
    state: &QuantumState,
) -> Result<f64, IdealizedError> {
    let (pa, pb) = check_qubit(state)?;
    let n = app.n_slots as f64;
    Ok(1.0 - (8.0 / n) * pa * pb)
}

/// Pointer mean and variance before and after the interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerStats {
    pub pre_mean: f64,
    pub post_mean: f64,
    pub pre_var: f64,
    pub post_var: f64,
}

/// Closed-form pointer statistics for the ±1 observable.
///
/// The post distribution is the uniform 1…N pointer shifted by the ±1 spin
/// outcome, so the mean shifts by `⟨S⟩ = |α|² − |β|²` and the variance grows
/// by `(ΔS)² = 1 − ⟨S⟩²` exactly.
pub fn pointer_stats(
    app: &IdealizedApparatus,
    state: &QuantumState,
) -> Result<PointerStats, IdealizedError> {
    let (pa, pb) = check_qubit(state)?;
    let n = app.n_slots as f64;
    let pre_mean = (n + 1.0) / 2.0;
    let pre_var = (n * n - 1.0) / 12.0;
    let spin_mean = pa - pb;
    let spin_var = 1.0 - spin_mean * spin_mean;
    Ok(PointerStats {
        pre_mean,
        post_mean: pre_mean + spin_mean,
        pre_var,
        post_var: pre_var + spin_var,
    })
}

/// Draws one pointer outcome from [`outcome_distribution`].
pub fn sample_outcome(
    app: &IdealizedApparatus,
    state: &QuantumState,
    rng: &mut RandomStream,
) -> Result<usize, IdealizedError> {
    let dist = outcome_distribution(app, state)?;
    Ok(rng.pick_weighted(&dist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sym_state() -> QuantumState {
        QuantumState::qubit(C64::ONE, C64::ONE).unwrap()
    }

    /// Independent route: the full post-interaction composite state.
    ///
    /// Builds the (N+2)×2 amplitude table of the entangled pointer⊗system
    /// state (uniform slots 1…N, shifted ±1 by the spin), then derives the
    /// outcome distribution and conditional post-states by conditioning.
    struct CompositeOracle {
        /// amps[i][s]: amplitude of pointer slot i with spin s (0 = ↑).
        amps: Vec<[C64; 2]>,
    }

    impl CompositeOracle {
        fn build(n: usize, state: &QuantumState) -> Self {
            let mut amps = vec![[C64::ZERO; 2]; n + 2];
            let w = 1.0 / (n as f64).sqrt();
            for slot in 1..=n {
                amps[slot + 1][0] += state.amp(0) * w;
                amps[slot - 1][1] += state.amp(1) * w;
            }
            Self { amps }
        }

        fn distribution(&self) -> Vec<f64> {
            self.amps
                .iter()
                .map(|row| row[0].norm_sqr() + row[1].norm_sqr())
                .collect()
        }

        fn conditional_state(&self, i: usize) -> Option<QuantumState> {
            QuantumState::new(vec![self.amps[i][0], self.amps[i][1]]).ok()
        }

        /// Probability-weighted average of conditional projectors.
        fn averaged_density(&self) -> DensityMatrix {
            let dist = self.distribution();
            let parts: Vec<(f64, QuantumState)> = dist
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(i, &p)| (p, self.conditional_state(i).unwrap()))
                .collect();
            DensityMatrix::mixture(&parts).unwrap()
        }

        fn pointer_moments(&self) -> (f64, f64) {
            let dist = self.distribution();
            let mean: f64 = dist.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
            let second: f64 = dist
                .iter()
                .enumerate()
                .map(|(i, p)| (i * i) as f64 * p)
                .sum();
            (mean, second - mean * mean)
        }
    }

    #[test]
    fn distribution_examples() {
        // Eigenstate α = 1, N = 8: flat 1/8 over 2..=9, zero below.
        let app = IdealizedApparatus::new(8).unwrap();
        let up = QuantumState::basis_state(2, 0);
        let dist = outcome_distribution(&app, &up).unwrap();
        assert_eq!(dist.len(), 10);
        assert_eq!(dist[0], 0.0);
        assert_eq!(dist[1], 0.0);
        for &p in &dist[2..=9] {
            assert_relative_eq!(p, 0.125, epsilon = 1e-15);
        }

        // |α|² = 0.36, N = 10.
        let app = IdealizedApparatus::new(10).unwrap();
        let s = QuantumState::qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let dist = outcome_distribution(&app, &s).unwrap();
        assert_relative_eq!(dist[10], 0.036, epsilon = 1e-15);
        assert_relative_eq!(dist[11], 0.036, epsilon = 1e-15);
        assert_relative_eq!(dist[0], 0.064, epsilon = 1e-15);
        assert_relative_eq!(dist[1], 0.064, epsilon = 1e-15);
        assert_relative_eq!(dist.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn middle_band_mass_is_one_minus_two_over_n() {
        let mut rng = RandomStream::new(31);
        for n in [3usize, 8, 21] {
            let app = IdealizedApparatus::new(n).unwrap();
            let s = QuantumState::random_pure(2, &mut rng);
            let dist = outcome_distribution(&app, &s).unwrap();
            let middle: f64 = dist[2..n].iter().sum();
            assert_relative_eq!(middle, 1.0 - 2.0 / n as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn middle_band_probabilities_are_state_independent() {
        let app = IdealizedApparatus::new(12).unwrap();
        let mut rng = RandomStream::new(32);
        let reference = outcome_distribution(&app, &sym_state()).unwrap();
        for _ in 0..20 {
            let s = QuantumState::random_pure(2, &mut rng);
            let dist = outcome_distribution(&app, &s).unwrap();
            for i in 2..12 {
                assert_eq!(dist[i], reference[i], "middle band exactly flat");
            }
        }
    }

    #[test]
    fn informative_band_reproduces_born_weights_exactly() {
        let app = IdealizedApparatus::new(9).unwrap();
        let mut rng = RandomStream::new(33);
        for _ in 0..20 {
            let s = QuantumState::random_pure(2, &mut rng);
            let dist = outcome_distribution(&app, &s).unwrap();
            let top = dist[9] + dist[10];
            assert_relative_eq!(top, s.probabilities()[0] * 2.0 / 9.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn post_states_by_band() {
        let app = IdealizedApparatus::new(8).unwrap();
        let s = QuantumState::qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap();

        let mid = post_state_given_outcome(&app, &s, 3).unwrap();
        assert_relative_eq!(mid.fidelity(&s).unwrap(), 1.0, epsilon = 1e-15);

        let top = post_state_given_outcome(&app, &s, 8).unwrap();
        assert_eq!(top, QuantumState::basis_state(2, 0));

        let bottom = post_state_given_outcome(&app, &s, 1).unwrap();
        assert_eq!(bottom, QuantumState::basis_state(2, 1));
    }

    #[test]
    fn impossible_outcome_is_an_error() {
        let app = IdealizedApparatus::new(8).unwrap();
        let up = QuantumState::basis_state(2, 0);
        assert!(matches!(
            post_state_given_outcome(&app, &up, 0),
            Err(IdealizedError::ImpossibleOutcome { index: 0 })
        ));
        assert!(matches!(
            post_state_given_outcome(&app, &up, 42),
            Err(IdealizedError::ImpossibleOutcome { index: 42 })
        ));
    }

    #[test]
    fn reduced_density_examples() {
        // Eigenstate: nothing to damp.
        let app = IdealizedApparatus::new(8).unwrap();
        let up = QuantumState::basis_state(2, 0);
        let rho = reduced_density(&app, &up).unwrap();
        assert_eq!(rho.element(0, 0), C64::ONE);
        assert_eq!(rho.element(0, 1), C64::ZERO);

        // Symmetric state, N = 8: off-diagonal 1/2 − 1/8 = 0.375.
        let rho = reduced_density(&app, &sym_state()).unwrap();
        assert_relative_eq!(rho.element(0, 1).re, 0.375, epsilon = 1e-15);

        // N → ∞ recovers the pure projector.
        let app = IdealizedApparatus::new(4_000_000).unwrap();
        let rho = reduced_density(&app, &sym_state()).unwrap();
        assert_relative_eq!(rho.element(0, 1).re, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn closed_forms_match_composite_enumeration() {
        // Distribution, averaged density, purity, and pointer moments all
        // against the independent composite-state oracle, to 1e-10.
        let mut rng = RandomStream::new(34);
        for n in 3..=20usize {
            let app = IdealizedApparatus::new(n).unwrap();
            for _ in 0..10 {
                let s = QuantumState::random_pure(2, &mut rng);
                let oracle = CompositeOracle::build(n, &s);

                let dist = outcome_distribution(&app, &s).unwrap();
                let brute = oracle.distribution();
                for (a, b) in dist.iter().zip(&brute) {
                    assert!((a - b).abs() < 1e-10);
                }

                let rho = reduced_density(&app, &s).unwrap();
                let brute_rho = oracle.averaged_density();
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((rho.element(i, j) - brute_rho.element(i, j)).norm() < 1e-10);
                    }
                }

                assert!((purity_weak(&app, &s).unwrap() - brute_rho.purity()).abs() < 1e-10);

                let stats = pointer_stats(&app, &s).unwrap();
                let (bm, bv) = oracle.pointer_moments();
                assert!((stats.post_mean - bm).abs() < 1e-10);
                assert!((stats.post_var - bv).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn purity_examples() {
        let app = IdealizedApparatus::new(8).unwrap();

        // Exact value for the symmetric state at N = 8; the leading-order
        // form gives the familiar 0.75 and differs at O(1/N²).
        assert_relative_eq!(
            purity_weak(&app, &sym_state()).unwrap(),
            0.78125,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            purity_weak_leading_order(&app, &sym_state()).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            purity_weak(&app, &sym_state()).unwrap()
                - purity_weak_leading_order(&app, &sym_state()).unwrap(),
            8.0 * 0.25 / 64.0,
            epsilon = 1e-15
        );

        // Eigenstates are untouched for any N.
        let up = QuantumState::basis_state(2, 0);
        assert_relative_eq!(purity_weak(&app, &up).unwrap(), 1.0, epsilon = 1e-15);

        // Large N: arbitrarily close to unit purity.
        let app = IdealizedApparatus::new(800).unwrap();
        assert_relative_eq!(
            purity_weak_leading_order(&app, &sym_state()).unwrap(),
            0.9975,
            epsilon = 1e-12
        );
        assert_relative_eq!(purity_weak(&app, &sym_state()).unwrap(), 0.9975, epsilon = 1e-5);

        // Exact purity always matches the reduced-density purity.
        let mut rng = RandomStream::new(35);
        for _ in 0..20 {
            let s = QuantumState::random_pure(2, &mut rng);
            let direct = reduced_density(&app, &s).unwrap().purity();
            assert_relative_eq!(purity_weak(&app, &s).unwrap(), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn pointer_stats_examples() {
        let app = IdealizedApparatus::new(8).unwrap();

        let up = QuantumState::basis_state(2, 0);
        let stats = pointer_stats(&app, &up).unwrap();
        assert_relative_eq!(stats.post_mean, 5.5, epsilon = 1e-15);
        assert_relative_eq!(stats.pre_var, 5.25, epsilon = 1e-15);
        assert_relative_eq!(stats.post_var, 5.25, epsilon = 1e-15);

        let stats = pointer_stats(&app, &sym_state()).unwrap();
        assert_relative_eq!(stats.post_mean, stats.pre_mean, epsilon = 1e-15);
        assert_relative_eq!(stats.post_var, stats.pre_var + 1.0, epsilon = 1e-15);
    }

    #[test]
    fn too_few_slots_rejected() {
        assert!(matches!(
            IdealizedApparatus::new(2),
            Err(IdealizedError::TooFewSlots { n: 2 })
        ));
    }

    #[test]
    fn non_qubit_rejected() {
        let app = IdealizedApparatus::new(8).unwrap();
        let s = QuantumState::new(vec![C64::ONE, C64::ZERO, C64::ZERO]).unwrap();
        assert!(outcome_distribution(&app, &s).is_err());
    }

    #[test]
    fn sampling_matches_distribution() {
        let app = IdealizedApparatus::new(6).unwrap();
        let s = QuantumState::qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let dist = outcome_distribution(&app, &s).unwrap();
        let mut rng = RandomStream::new(36);
        let n = 50_000;
        let mut counts = vec![0usize; dist.len()];
        for _ in 0..n {
            counts[sample_outcome(&app, &s, &mut rng).unwrap()] += 1;
        }
        for (i, (&cnt, &p)) in counts.iter().zip(&dist).enumerate() {
            let freq = cnt as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (freq - p).abs() < 5.0 * se + 1e-9,
                "outcome {i}: freq {freq} vs p {p}"
            );
        }
    }
}
