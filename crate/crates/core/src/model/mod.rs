//! Circuit configuration, model assembly and Fourier-spectrum analysis.

mod circuit;
mod coefficients;
mod config;
mod spectrum;

pub use circuit::{build_model, forward, Model, Op, PreparedCircuit};
pub use coefficients::{extract_coefficients, fit_fourier, CoefficientTable};
pub use config::{CircuitConfig, InitKind, InitStrategy, Layout};
pub use spectrum::{spectrum_of, FrequencySpectrum, DEFAULT_DEDUP_TOLERANCE};
