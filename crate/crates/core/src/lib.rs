pub mod cesaro;
pub mod data;
pub mod error;
pub mod experiments;
pub mod gradients;
pub mod model;
pub mod quantum;
pub mod rng;
pub mod training;

pub use error::{Error, Result};
