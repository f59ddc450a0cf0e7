//! Simulation and verification toolkit for weak quantum measurements.
//!
//! The crate covers four connected pieces of weak-measurement physics on
//! finite-dimensional systems, each backed by closed-form expressions and
//! cross-checked against Monte Carlo sampling and numerical quadrature:
//!
//! - [`qcore`] — states, density matrices, observables, Bloch vectors, and
//!   projective (strong) measurement.
//! - [`idealized`] — the exactly solvable N-slot pointer apparatus: discrete
//!   outcome distribution, conditional post-states, reduced density matrix,
//!   purity, and pointer moments.
//! - [`meter`] — the Gaussian-pointer model: POVM elements, outcome density,
//!   post-measurement states, exact mixture sampling, moments, and the
//!   outcome-averaged reduced density matrix.
//! - [`sequential`] — repeated weak measurements on a single copy: joint
//!   outcome statistics, Bayesian state updates, the distribution of the
//!   outcome average and its strong-measurement limit, eigenbasis quenching,
//!   and the error-disturbance trade-off.
//! - [`lg`] — resource accounting for Leggett-Garg tests: statistical errors
//!   of weak vs strong strategies and the crossover condition.
//! - [`tomo`] — weak values, single-weak-value state tomography, the
//!   conformal weak-value coordinates on the qubit state space, error
//!   volumes, and optimization of the post-selection.
//!
//! Monte Carlo experiments run through [`mc`] with deterministic
//! per-realization random substreams ([`stream`]), so results are identical
//! for any worker count. The `parallel` feature (on by default) runs
//! realizations on a rayon pool; without it the same API falls back to a
//! sequential loop.
//!
//! The `weakmeas` binary exposes each experiment as a CLI subcommand with
//! JSON configs and CSV/JSON result documents (see [`config`], [`experiment`]
//! and [`report`]).

pub mod config;
pub mod experiment;
pub mod idealized;
pub mod lg;
pub mod mc;
pub mod meter;
pub mod numeric;
pub mod qcore;
pub mod report;
pub mod sequential;
pub mod stats;
pub mod stream;
pub mod tomo;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind};
pub use experiment::{run_experiment, ResultDocument, RunError};
pub use qcore::{BlochVector, DensityMatrix, Observable, QuantumState};
pub use stream::{derive_stream, RandomStream};
