//! Numerical certification of strict dissipativity for one-dimensional
//! compressible fluid flow with thermally relaxed (Cattaneo-type) heat
//! conduction.
//!
//! The library assembles the quasi-linear system matrices of the flow
//! equations at a given state, symmetrizes them, verifies hyperbolicity and
//! the Kawashima-Shizuta genuine coupling condition, constructs compensating
//! matrices for the viscous and inviscid cases, sweeps the Fourier dispersion
//! relation and empirically confirms the linear decay rates of perturbations
//! of equilibrium states.
//!
//! The pipeline stages map onto the modules:
//!
//! * [`eos`] — fluid models (equation of state, transport coefficients) and
//!   structural hypothesis checks,
//! * [`matrices`] — system matrices `A0, A1, B, Q, D` and their symmetrized
//!   counterparts,
//! * [`spectral`] — characteristic speeds and strict hyperbolicity,
//! * [`coupling`] — genuine coupling and compensating matrices,
//! * [`dispersion`] — dispersion-relation sweeps and the decay constant `k`,
//! * [`decay`] — Fourier-space evolution, energy identities and decay traces,
//! * [`report`] — configuration ingestion, pipeline orchestration and report
//!   emission for the `dissiplab` binary.

pub mod coupling;
pub mod decay;
pub mod dispersion;
pub mod eos;
pub mod linalg;
pub mod matrices;
pub mod report;
pub mod spectral;

pub use eos::{FluidModel, ThermoEval};
pub use matrices::{StateVector, SymmetricSystem, SystemMatrices};
