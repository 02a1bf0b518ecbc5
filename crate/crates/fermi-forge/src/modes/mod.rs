//! Eigenstates of the unmodulated gravitational cavity (linear potential over
//! a hard floor) and phase-space representations.

mod airy;
mod cavity;
mod wigner;

pub use airy::{airy_ai, airy_zero};
pub use cavity::{cavity_mode, mode_overlaps, CavityMode};
pub use wigner::{wigner, WignerField};
