//! Simulation library for a particle bouncing under gravity on a periodically
//! modulated exponential mirror (the atom-optics Fermi accelerator).
//!
//! Everything operates in scaled, dimensionless units: the Hamiltonian is
//! `H = p²/2 + z + V₀ exp(−κ(z − λ sin t))` and the commutator `[z, p] = i k̄`
//! fixes the scaled Planck constant `k̄`. [`params::scale_parameters`] converts
//! laboratory quantities into this unit system; every engine downstream is
//! purely dimensionless.
//!
//! The crate is organised around five engines plus shared state:
//!
//! * [`classical`] — continuous trajectory integration, the event-driven
//!   bounce map, its Chirikov standard-map reduction, and chaos diagnostics
//!   (Jacobian determinant, Lyapunov exponent, diffusion records,
//!   accelerating-mode windows, survival probability).
//! * [`quantum`] — spectral split-step propagation of the scaled
//!   time-dependent Schrödinger equation with localization diagnostics,
//!   autocorrelation and space-time density ("carpet") extraction.
//! * [`modes`] — eigenstates of the unmodulated gravitational cavity
//!   (triangular well, Airy functions) and Wigner phase-space distributions.
//! * [`revivals`] — analytic recurrence-time theory: Mathieu quasi-energies,
//!   modification factors, classical-period and quantum-revival predictions.
//! * [`analysis`] — distribution fitting, peak detection, λ-scans, run
//!   manifests and deterministic CSV output.

pub mod analysis;
pub mod classical;
pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod modes;
pub mod params;
pub mod quantum;
pub mod revivals;
pub mod state;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use params::{PhysicalParams, ScaledParams};
pub use state::{Ensemble, PhasePoint, WavefunctionState};
