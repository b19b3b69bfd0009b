//! Full-batch Adam training, R² scoring and prefactor-displacement statistics.

mod adam;
mod metrics;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use metrics::{displacement_stats, quantile, r2_score, Summary};
pub use train::{train, RunRecord, RunSeeds, TrainConfig};
