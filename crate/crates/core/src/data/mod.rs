//! Synthetic Fourier targets, sampled datasets and the airline-passengers series.

mod dataset;
mod flight;
mod target;

pub use dataset::{
    linspace_pi, sample_dataset, split, Dataset, MinMaxScaler, Samples, SplitDataset,
};
pub use flight::{flight_passengers_bundled, load_flight_passengers, parse_flight_csv, FlightData};
pub use target::{
    evaluate_target, make_target, shift_spectrum, shift_spectrum_with_sigma, ShiftedSpectrum,
    TargetSpec,
};
