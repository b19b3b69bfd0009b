//! Fejér approximation error for a few frequencies and the gate-count table.

use fourier_vqc::cesaro::{cesaro_report, DEFAULT_GRID};

fn main() -> fourier_vqc::Result<()> {
    let report = cesaro_report(
        &[2.7, 4.3],
        &[13, 40, 121, 364, 1093],
        13.0,
        0.1,
        DEFAULT_GRID,
    )?;
    println!(
        "{:>5} {:>6} {:>12} {:>12} {:>10} frobenius",
        "w", "M", "sup_error", "scaled", "sup|P|"
    );
    for r in &report.convergence {
        println!(
            "{:>5} {:>6} {:>12.4e} {:>12.4} {:>10.6} {}",
            r.w, r.order, r.sup_error, r.scaled_error, r.sup_modulus, r.frobenius_bound_holds
        );
    }
    for s in &report.scaling {
        println!(
            "{:?}: k ~ {} ({}), ansatz params {}",
            s.architecture, s.k_required, s.k_opt_note, s.ansatz_params
        );
    }
    Ok(())
}
