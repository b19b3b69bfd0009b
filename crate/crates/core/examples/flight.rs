//! Fit the bundled airline-passenger series with a four-qubit circuit under
//! each prefactor initialization and print test R².
//!
//! `cargo run --release --example flight -- [iterations] [seeds]`

use std::env;

use fourier_vqc::data::{flight_passengers_bundled, split};
use fourier_vqc::model::{build_model, CircuitConfig, InitKind, InitStrategy};
use fourier_vqc::rng::derive_seed;
use fourier_vqc::training::{train, RunSeeds, Summary, TrainConfig};

fn main() -> fourier_vqc::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let iterations: usize = args
        .first()
        .map_or(5000, |s| s.parse().expect("iterations"));
    let seeds: u64 = args.get(1).map_or(3, |s| s.parse().expect("seed count"));

    let flight = flight_passengers_bundled()?;
    let cfg = TrainConfig {
        learning_rate: 0.001,
        iterations,
        record_every: iterations,
        ..TrainConfig::default()
    };
    for kind in InitKind::ALL {
        let model = build_model(CircuitConfig::parallel(4, InitStrategy::new(kind)), 0)?;
        let mut scores = Vec::new();
        for s in 0..seeds {
            let split_seed = derive_seed(0, "flight-split", &[s]);
            let parts = split(&flight.dataset, 0.8, split_seed)?;
            let run = train(
                &model,
                &parts.train_samples(&flight.dataset),
                &parts.test_samples(&flight.dataset),
                &cfg,
                RunSeeds {
                    target: 0,
                    weight: split_seed,
                },
            )?;
            scores.push(run.r2_test.unwrap_or(f64::NAN));
        }
        let median = Summary::of(&scores).map_or(f64::NAN, |s| s.median);
        println!(
            "{:<18} median test R2 {median:.4}  runs {scores:.4?}",
            kind.label()
        );
    }
    Ok(())
}
