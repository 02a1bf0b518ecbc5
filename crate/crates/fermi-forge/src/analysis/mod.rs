//! Statistics, fitting, scan orchestration, manifests and CSV output.

mod csv_io;
pub(crate) mod fitting;
mod manifest;
mod peaks;
mod scan;

pub use csv_io::{format_g17, write_csv};
pub use fitting::{fit_distribution, histogram, FitModel, FitResult, Histogram};
pub use manifest::RunManifest;
pub use peaks::detect_revival_peaks;
pub use scan::{lambda_scan, derive_seed, Engine, ScanEntry, ScanResult};
