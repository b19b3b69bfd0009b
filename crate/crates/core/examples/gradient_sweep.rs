//! Prefactor gradient magnitude after one Adam step as a function of the
//! initial prefactor, for a target with frequencies {11, 11.2, 13}.

use fourier_vqc::experiments::{run_gradient_sweep, ExperimentManifest, RunOptions};

fn main() -> fourier_vqc::Result<()> {
    let report = run_gradient_sweep(&ExperimentManifest::grad_sweep(0), &RunOptions::default())?;
    let sweep = report.gradient_sweep.expect("sweep suite fills the table");
    let peak = sweep.rows.iter().map(|r| r.mean_abs).fold(0.0, f64::max);
    for r in &sweep.rows {
        let bar = "#".repeat((40.0 * r.mean_abs / peak).round() as usize);
        println!("α₀ = {:>5.2}  {:.4e}  {bar}", r.alpha0, r.mean_abs);
    }
    println!(
        "window means: [1,5] {:.4e}, [10,14] {:.4e}",
        sweep.window_mean(1.0, 5.0).unwrap_or(f64::NAN),
        sweep.window_mean(10.0, 14.0).unwrap_or(f64::NAN)
    );
    Ok(())
}
