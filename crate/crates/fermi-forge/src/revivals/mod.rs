//! Analytic recurrence-time theory for the driven gravitational cavity:
//! cavity frequency and nonlinearity, resonance data, Mathieu quasi-energies,
//! modification factors and recurrence-time predictions.

mod frequency;
mod mathieu;
mod quasienergy;
mod times;

pub use frequency::{
    classical_frequency, matrix_element, nonlinearity, resonance_data, ResonanceData,
};
pub use mathieu::{mathieu_char_value, MathieuSolution};
pub use quasienergy::{
    quasi_energy, resonance_center_evolution_flag, CenterClass, QuasiEnergyInput,
};
pub use times::{
    alpha_factor, beta_factor, general_modification_factors, modification_factors,
    recurrence_times, NonlinearityRegime, RevivalEstimate,
};
