//! Train one three-qubit model on a random target and print its trajectory.
//!
//! `cargo run --release --example single_run -- [unary|ternary] [w1,w2,...] [lr] [iters] [seed]`

use std::env;

use fourier_vqc::data::{make_target, sample_dataset, split};
use fourier_vqc::model::{build_model, CircuitConfig, InitKind, InitStrategy};
use fourier_vqc::training::{train, RunSeeds, TrainConfig};

fn main() -> fourier_vqc::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let kind = match args.first().map(String::as_str) {
        Some("unary") => InitKind::UnaryTrainable,
        _ => InitKind::TernaryTrainable,
    };
    let freqs: Vec<f64> = args
        .get(1)
        .map(|s| {
            s.split(',')
                .map(|v| v.parse().expect("frequency"))
                .collect()
        })
        .unwrap_or_else(|| vec![11.0, 11.2, 13.0]);
    let lr: f64 = args
        .get(2)
        .map_or(0.001, |s| s.parse().expect("learning rate"));
    let iterations: usize = args.get(3).map_or(5000, |s| s.parse().expect("iterations"));
    let seed: u64 = args.get(4).map_or(0, |s| s.parse().expect("seed"));

    let target = make_target(&freqs, seed);
    let data = sample_dataset(&target, 100)?;
    let parts = split(&data, 0.8, seed)?;
    let model = build_model(CircuitConfig::parallel(3, InitStrategy::new(kind)), seed)?;
    let cfg = TrainConfig {
        learning_rate: lr,
        iterations,
        seed,
        record_every: (iterations / 10).max(1),
        ..TrainConfig::default()
    };
    let start = std::time::Instant::now();
    let run = train(
        &model,
        &parts.train_samples(&data),
        &parts.test_samples(&data),
        &cfg,
        RunSeeds {
            target: seed,
            weight: seed,
        },
    )?;

    println!("init {:?} on target {freqs:?}, lr {lr}", kind);
    for (i, (it, loss)) in run
        .recorded_iterations
        .iter()
        .zip(&run.loss_curve)
        .enumerate()
    {
        let alpha: Vec<String> = run
            .alpha_trajectory
            .iter()
            .map(|s| format!("{:.4}", s[i]))
            .collect();
        println!(
            "iter {it:>6}  loss {loss:.6e}  alpha [{}]",
            alpha.join(", ")
        );
    }
    println!(
        "R2 train {:?}  test {:?}  ({:.1?})",
        run.r2_train,
        run.r2_test,
        start.elapsed()
    );
    Ok(())
}
