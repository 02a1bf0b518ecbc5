//! Classical dynamics: continuous trajectories of the modulated-mirror
//! Hamiltonian, the event-driven bounce map and its standard-map reduction,
//! and chaos diagnostics.

mod bounce_map;
mod chaos;
mod integrate;
mod standard_map;
mod windows;

pub use bounce_map::{bounce_map_step, flight_time, BounceState};
pub use chaos::{jacobian_determinant, lyapunov_exponent, map_lyapunov, LyapunovEstimate};
pub use integrate::{
    force, force_flagged, hamiltonian, integrate_trajectory, propagate_ensemble,
    survival_probability, DiffusionRecord, EnsembleRun, Region, Trajectory,
};
pub use standard_map::{standard_map_step, MapParams, K_CR};
pub use windows::{accelerating_windows, AccelWindow};
