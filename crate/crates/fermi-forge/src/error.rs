//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or scaled parameter violates its domain (nonpositive mass,
    /// negative modulation strength, ...).
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// Configuration file problem: syntax, unknown key, missing value.
    #[error("config error: {0}")]
    Config(String),

    /// Grid construction or coverage failure.
    #[error("grid error: {0}")]
    Grid(String),

    /// Initial-state construction failure (packet clipped by grid, empty
    /// ensemble, ...).
    #[error("state construction error: {0}")]
    Construction(String),

    /// Integrator refused the requested step size; a workable value is
    /// suggested.
    #[error("time step {requested} too large: {reason}; suggested dt = {suggested}")]
    StepSize {
        requested: f64,
        suggested: f64,
        reason: String,
    },

    /// The implicit flight-time equation has no positive root within the
    /// search horizon: the particle never clears the oscillating surface.
    #[error("trapped at wall: no bounce within {horizon} time units (p = {p}, phi = {phi})")]
    TrappedAtWall { p: f64, phi: f64, horizon: f64 },

    /// Benettin separation left the representable window between
    /// renormalizations.
    #[error("lyapunov separation {separation:e} outside safe window; reduce renorm_interval {interval}")]
    AdjustInterval { separation: f64, interval: f64 },

    /// Probability reached the spatial grid edge during propagation.
    #[error("boundary contamination at t = {t}: edge probability {edge_probability:e} exceeds {limit:e}")]
    BoundaryContamination {
        t: f64,
        edge_probability: f64,
        limit: f64,
    },

    /// Per-step norm drift exceeded the unitarity contract.
    #[error("norm drift {drift:e} per step exceeds {limit:e}; reduce dt")]
    NormDrift { drift: f64, limit: f64 },

    /// Grids of two states disagree where they must match.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Detuning too close to exact resonance for the secular theory.
    #[error("near-resonance divergence: |1 - omega_N/omega| = {detuning:e} below guard {guard:e}")]
    NearResonance { detuning: f64, guard: f64 },

    /// A modification-factor denominator (1 - mu^2) vanished.
    #[error("singular modification factor: |1 - mu^2| = {0:e}")]
    Singularity(f64),

    /// The nonlinearity is zero; recurrence formulas degenerate to the
    /// harmonic limit.
    #[error("vanishing nonlinearity: quantum revival time diverges")]
    VanishingNonlinearity,

    /// An iterative computation failed to converge; history of residuals
    /// attached.
    #[error("no convergence: {context}; residual history {history:?}")]
    NonConvergence { context: String, history: Vec<f64> },

    /// Distribution fit rejected (too few bins, degenerate variance).
    #[error("fit error: {0}")]
    Fit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
