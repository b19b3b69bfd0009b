//! Recover the Fourier coefficients of a trained-looking circuit by least squares
//! on its spectrum, and compare the refit with the circuit itself.

use std::f64::consts::PI;

use fourier_vqc::model::{
    build_model, extract_coefficients, forward, spectrum_of, CircuitConfig, InitKind, InitStrategy,
    DEFAULT_DEDUP_TOLERANCE,
};

fn main() -> fourier_vqc::Result<()> {
    let init = InitStrategy::with_prefactors(InitKind::UnaryTrainable, vec![1.0, 1.2]);
    let model = build_model(CircuitConfig::parallel(2, init), 0)?;
    // Move away from the all-ones ansatz so more coefficients are non-zero.
    let theta = model
        .theta()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            block
                .iter()
                .enumerate()
                .map(|(m, _)| ((b * 31 + m * 7) % 11) as f64 / 10.0 - 0.5)
                .collect()
        })
        .collect();
    let model = model.with_theta(theta)?;

    let spectrum = spectrum_of(model.alpha(), DEFAULT_DEDUP_TOLERANCE);
    let grid: Vec<f64> = (0..100).map(|i| -PI + 2.0 * PI * i as f64 / 99.0).collect();
    let table = extract_coefficients(&model, &spectrum, &grid)?;
    println!(
        "residual {:.2e}, condition number {:.2e}",
        table.residual_norm, table.condition_number
    );
    for (w, c) in table.frequencies.iter().zip(&table.coefficients) {
        if *w >= 0.0 {
            println!(
                "ω = {w:>5.2}  c = {:+.6} {:+.6}i  |c| = {:.6}",
                c.re,
                c.im,
                c.norm()
            );
        }
    }
    for x in [-2.0, 0.3, 1.9] {
        println!(
            "x = {x:>4}: circuit {:+.10}  series {:+.10}",
            forward(&model, x)?,
            table.evaluate(x).re
        );
    }
    Ok(())
}
