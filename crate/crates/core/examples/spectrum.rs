//! Frequency spectra of unary, ternary and arbitrary prefactor choices.
//!
//! `cargo run --example spectrum -- 1.0,1.2,3.0`

use fourier_vqc::model::{spectrum_of, DEFAULT_DEDUP_TOLERANCE};

fn show(label: &str, alpha: &[f64]) {
    let s = spectrum_of(alpha, DEFAULT_DEDUP_TOLERANCE);
    println!(
        "{label:<10} α = {alpha:?}: |Ω| = {}, max frequency {}, non-negative part {:?}",
        s.len(),
        s.max_frequency(),
        s.nonnegative()
    );
}

fn main() {
    show("unary", &[1.0, 1.0, 1.0]);
    show("ternary", &[1.0, 3.0, 9.0]);
    show("generic", &[1.0, 1.2, 3.0]);
    if let Some(arg) = std::env::args().nth(1) {
        let alpha: Vec<f64> = arg
            .split(',')
            .map(|v| v.trim().parse().expect("numeric prefactor"))
            .collect();
        show("custom", &alpha);
    }
}
