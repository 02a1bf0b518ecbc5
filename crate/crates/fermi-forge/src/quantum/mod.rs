//! Spectral split-step propagation of the scaled time-dependent Schrödinger
//! equation `i k̄ ∂ψ/∂t = [p²/2 + z + V₀ e^(−κ(z−λ sin t))] ψ`, with
//! localization diagnostics and space-time density extraction.

mod carpet;
mod evolve;
mod localization;
mod observables;
mod split_step;

pub use carpet::CarpetField;
pub use evolve::{evolve, BoundaryPolicy, EvolveResult, ObservableSeries, PropagationPlan};
pub use localization::{
    empirical_break_time, fit_localization, localization_window, quantum_break_time,
    FitOpts, LocalizationReport, WindowClass, WindowClassification,
};
pub use observables::{autocorrelation, momentum_distribution, momentum_moments};
pub use split_step::{split_step, SplitStepPropagator};
