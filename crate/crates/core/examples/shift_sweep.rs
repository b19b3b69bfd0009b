//! Test R² of all four initializations as the target spectrum drifts upward,
//! written as CSV/JSON/SVG into `./shift-sweep-example`.
//!
//! `cargo run --release --example shift_sweep -- [iterations]`

use fourier_vqc::experiments::{
    emit_report, run_shift_sweep, ExperimentManifest, ReportFormat, RunCounts, RunOptions,
};

fn main() -> fourier_vqc::Result<()> {
    let iterations = std::env::args()
        .nth(1)
        .map_or(1500, |s| s.parse().expect("integer"));
    let mut m = ExperimentManifest::shift_sweep(0);
    m.shift_means = vec![0.0, 3.0, 6.0, 9.0];
    m.counts = RunCounts {
        targets: 2,
        seeds: 1,
    };
    m.iterations = iterations;
    let out = std::path::Path::new("shift-sweep-example");
    let report = run_shift_sweep(&m, &RunOptions::in_dir(out))?;
    for f in ReportFormat::ALL {
        println!("wrote {}", emit_report(&report, f, out)?.display());
    }
    for g in &report.groups {
        let med = g.r2_test.as_ref().map_or(f64::NAN, |s| s.median);
        println!(
            "μ = {:>3}  {:<18} median test R² {med:.4}",
            g.group.mu.unwrap_or(0.0),
            g.group.strategy
        );
    }
    Ok(())
}
