//! Desk-scale reachability study: unary versus ternary trainable prefactors on
//! {1, 1.2, 3} and on the same spectrum shifted by 10.
//!
//! `cargo run --release --example reachability -- [targets] [seeds] [iterations]`

use fourier_vqc::experiments::{run_reachability, ExperimentManifest, RunCounts, RunOptions};

fn main() -> fourier_vqc::Result<()> {
    let arg = |i: usize, d: usize| {
        std::env::args()
            .nth(i)
            .map_or(d, |s| s.parse().expect("integer"))
    };
    let mut m = ExperimentManifest::reachability(0);
    m.counts = RunCounts {
        targets: arg(1, 2),
        seeds: arg(2, 2),
    };
    m.iterations = arg(3, 2000);
    m.learning_rates = vec![0.001];
    let report = run_reachability(&m, &RunOptions::default())?;
    for g in &report.groups {
        let r2 = g.r2_test.as_ref().expect("completed runs");
        let d = g.displacement.as_ref().expect("completed runs");
        println!(
            "{:<40} test R² median {:.4} [q25 {:.4}, q75 {:.4}]  |Δα| mean {:.3} max {:.3}",
            g.group.to_string(),
            r2.median,
            r2.q25,
            r2.q75,
            d.mean,
            d.max
        );
    }
    Ok(())
}
