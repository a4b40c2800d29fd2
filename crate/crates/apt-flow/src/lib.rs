//! Anti-parity-time-symmetric qubit dynamics and its quantum-circuit
//! realization.
//!
//! The crate models a two-level system driven by an anti-PT-symmetric
//! non-Hermitian Hamiltonian, tracks the information flow between two
//! evolving states, decomposes the non-unitary propagator into a linear
//! combination of unitaries, compiles that combination into small dilation
//! circuits with post-selection, and emulates an ensemble-style experiment
//! on pseudo-pure states with a tunable noise model.

pub mod apt;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod lcu;
pub mod nmr;
pub mod numerics;
pub mod observables;

pub use apt::{AptHamiltonian, ExperimentalFamily, PhaseRegime, SpectralData};
pub use error::{Error, Result};
pub use numerics::{C64, ComplexMatrix, DensityMatrix};
