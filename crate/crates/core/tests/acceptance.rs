//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.
//!
//! `cargo test --release --test acceptance` (the workspace test profile is
//! already optimized, so plain `cargo test` is fine too).

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;

use common::{brute_spectrum, check_partials, random_model, rng};
use fourier_vqc::cesaro::{
    aux_coefficient, aux_coefficient_quadrature, cesaro_mean, frobenius_gap, required_k_ternary,
    sup_error, ternary_reach, DEFAULT_GRID,
};
use fourier_vqc::experiments::{
    perturbed_unary, run_manifest, AggregateReport, ExperimentManifest, ReportFormat, RunCounts,
    RunOptions, Suite, TargetFamily, OMEGA_2,
};
use fourier_vqc::model::{spectrum_of, InitKind, InitStrategy, DEFAULT_DEDUP_TOLERANCE};

const SEED: u64 = 2024;

type Outcome = (bool, String);

fn run(opts: &RunOptions, m: &ExperimentManifest) -> AggregateReport {
    run_manifest(m, opts).expect("suite runs")
}

fn c1_gradient_oracle() -> Outcome {
    let mut r = rng(SEED);
    let (mut checked, mut worst_rel, mut bad) = (0usize, 0.0f64, Vec::new());
    for i in 0..200 {
        let model = random_model(&mut r);
        let x = r.random_range(-3.0..3.0);
        for c in check_partials(&model, x) {
            checked += 1;
            if c.analytic.abs() >= common::FD_SMALL {
                worst_rel = worst_rel.max((c.analytic - c.numeric).abs() / c.analytic.abs());
            }
            if !c.passes() && bad.len() < 3 {
                bad.push(format!(
                    "pair {i} {}: {} vs {}",
                    c.label, c.analytic, c.numeric
                ));
            }
        }
    }
    (
        bad.is_empty(),
        format!("200 (model, x) pairs, {checked} partials, worst rel err {worst_rel:.2e} {bad:?}"),
    )
}

fn c2_spectrum_oracle() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut mismatches = 0;
    for _ in 0..100 {
        let l = r.random_range(1..=4usize);
        let alpha: Vec<f64> = (0..l).map(|_| r.random_range(0.1..5.0)).collect();
        let got = spectrum_of(&alpha, DEFAULT_DEDUP_TOLERANCE).values;
        let want = brute_spectrum(&alpha, DEFAULT_DEDUP_TOLERANCE);
        if got.len() != want.len() || got.iter().zip(&want).any(|(a, b)| (a - b).abs() > 1e-9) {
            mismatches += 1;
        }
    }
    let equal_ok =
        (1..=6).all(|l| spectrum_of(&vec![1.7; l], DEFAULT_DEDUP_TOLERANCE).len() == 2 * l + 1);
    let tern = spectrum_of(&[1.0, 3.0, 9.0], DEFAULT_DEDUP_TOLERANCE);
    let tern_ok = tern.len() == 27 && tern.values[0] == -13.0 && tern.values[26] == 13.0;
    let powers_ok = (1..=5).all(|k| {
        let a: Vec<f64> = (0..k).map(|j| 3f64.powi(j)).collect();
        spectrum_of(&a, DEFAULT_DEDUP_TOLERANCE).len() == 3usize.pow(k as u32)
    });
    (
        mismatches == 0 && equal_ok && tern_ok && powers_ok,
        format!("100 random α: {mismatches} mismatches; 2L+1 {equal_ok}; {{1,3,9}} -> {} spanning ±13 {tern_ok}; 3^k {powers_ok}", tern.len()),
    )
}

fn reachability_manifest(strategy: InitStrategy, lrs: Vec<f64>) -> ExperimentManifest {
    let mut m = ExperimentManifest::reachability(SEED);
    m.families = vec![TargetFamily::new("omega2", &OMEGA_2)];
    m.strategies = vec![strategy];
    m.learning_rates = lrs;
    m.counts = RunCounts {
        targets: 5,
        seeds: 4,
    };
    m.iterations = 5000;
    m
}

fn c3_c4(opts: &RunOptions) -> (Outcome, Outcome) {
    let unary = run(
        opts,
        &reachability_manifest(perturbed_unary(3), vec![0.001, 0.01, 0.1]),
    );
    let ternary = run(
        opts,
        &reachability_manifest(InitStrategy::new(InitKind::TernaryTrainable), vec![0.001]),
    );
    let med_t = ternary
        .median_r2_test("omega2", "ternary_trainable", 0.001, None)
        .unwrap_or(f64::NAN);
    let med_u = unary
        .median_r2_test("omega2", "unary_trainable", 0.001, None)
        .unwrap_or(f64::NAN);
    let c3 = (
        med_t >= 0.95 && med_u <= 0.5,
        format!(
            "Ω₂ 5x4 runs, lr 0.001, 5000 it: ternary-trainable median test R² {med_t:.4} (≥ 0.95), unary-trainable {med_u:.4} (≤ 0.5)"
        ),
    );

    let disp = |lr: f64| {
        unary
            .group("omega2", "unary_trainable", lr, None)
            .and_then(|g| g.displacement.clone())
    };
    let pooled: Vec<f64> = unary
        .runs
        .iter()
        .filter(|r| r.group.learning_rate < 0.05)
        .flat_map(|r| r.displacements().collect::<Vec<_>>())
        .collect();
    let low_max = pooled.iter().copied().fold(0.0, f64::max);
    let low_mean = pooled.iter().sum::<f64>() / pooled.len().max(1) as f64;
    let high = disp(0.1);
    let high_max = high.as_ref().map_or(f64::NAN, |s| s.max);
    let c4 = (
        !pooled.is_empty() && low_max < 1.5 && high_max > 3.0,
        format!(
            "unary-trainable Ω₂: lr ∈ {{0.001, 0.01}} pooled |Δα| max {low_max:.3} mean {low_mean:.3} (< 1.5); lr 0.1 max {high_max:.3} mean {:.3} (> 3)",
            high.as_ref().map_or(f64::NAN, |s| s.mean)
        ),
    );
    (c3, c4)
}

fn c5_gradient_locality(opts: &RunOptions) -> Outcome {
    let report = run(opts, &ExperimentManifest::grad_sweep(SEED));
    let sweep = report.gradient_sweep.expect("sweep table");
    let near = sweep.window_mean(10.0, 14.0).unwrap_or(f64::NAN);
    let far = sweep.window_mean(1.0, 5.0).unwrap_or(f64::NAN);
    let peak = sweep
        .rows
        .iter()
        .max_by(|a, b| a.mean_abs.total_cmp(&b.mean_abs))
        .map_or(f64::NAN, |r| r.alpha0);
    (
        near > far,
        format!("mean |∂L/∂α| over α₀ ∈ [10,14] {near:.4e} vs [1,5] {far:.4e} (ratio {:.2}); peak at α₀ = {peak}", near / far),
    )
}

fn c6_shift_sweep(opts: &RunOptions) -> Outcome {
    let mut m = ExperimentManifest::shift_sweep(SEED);
    m.shift_means = vec![9.0];
    m.strategies = vec![
        InitStrategy::new(InitKind::UnaryTrainable),
        InitStrategy::new(InitKind::TernaryTrainable),
    ];
    m.counts = RunCounts {
        targets: 3,
        seeds: 3,
    };
    let report = run(opts, &m);
    let t = report
        .median_r2_test("omega1", "ternary_trainable", 0.001, Some(9.0))
        .unwrap_or(f64::NAN);
    let u = report
        .median_r2_test("omega1", "unary_trainable", 0.001, Some(9.0))
        .unwrap_or(f64::NAN);
    (
        t >= 0.9 && t > u,
        format!(
            "μ = 9, 3x3 runs: ternary-trainable median R² {t:.4} (≥ 0.9), unary-trainable {u:.4}"
        ),
    )
}

fn c7_flight(opts: &RunOptions) -> Outcome {
    let mut m = ExperimentManifest::flight(SEED);
    m.strategies = vec![
        InitStrategy::new(InitKind::UnaryTrainable),
        InitStrategy::new(InitKind::TernaryTrainable),
    ];
    let report = run(opts, &m);
    let t = report
        .median_r2_test("flight", "ternary_trainable", 0.001, None)
        .unwrap_or(f64::NAN);
    let u = report
        .median_r2_test("flight", "unary_trainable", 0.001, None)
        .unwrap_or(f64::NAN);
    let n = report.groups.iter().map(|g| g.runs).collect::<Vec<_>>();
    (
        t >= 0.9 && t > u,
        format!("4 qubits, runs per strategy {n:?}: ternary-trainable median R² {t:.4} (≥ 0.9), unary-trainable {u:.4}"),
    )
}

fn c8_cesaro() -> Outcome {
    let mut r = rng(SEED + 8);
    let mut worst_a = 0.0f64;
    let mut sampled = 0;
    while sampled < 50 {
        let n = r.random_range(-30..=30i64);
        let w = r.random_range(0.0..20.0);
        if (w - n.abs() as f64 * std::f64::consts::PI).abs() < 0.1 {
            continue;
        }
        sampled += 1;
        worst_a = worst_a.max((aux_coefficient(n, w) - aux_coefficient_quadrature(n, w)).norm());
    }
    let a = worst_a < 1e-9;

    let orders = [13usize, 40, 121, 364];
    let mut b = true;
    let mut c = true;
    let mut detail = Vec::new();
    for w in [2.7, 4.3] {
        let errs: Vec<f64> = orders
            .iter()
            .map(|&m| sup_error(&cesaro_mean(m, w), DEFAULT_GRID).unwrap())
            .collect();
        b &= errs.windows(2).all(|p| p[1] < p[0]);
        let scaled: Vec<f64> = orders
            .iter()
            .zip(&errs)
            .map(|(&m, e)| e * (m as f64 + 1.0) / (m as f64 + 1.0).ln())
            .collect();
        let (lo, hi) = scaled
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), &s| (l.min(s), h.max(s)));
        c &= hi / lo <= 4.0;
        let shown: Vec<String> = errs.iter().map(|e| format!("{e:.3e}")).collect();
        detail.push(format!(
            "w={w}: sup_err [{}], scaled band x{:.2}",
            shown.join(", "),
            hi / lo
        ));
    }

    let mut d = true;
    let p = cesaro_mean(40, 2.7);
    let q = cesaro_mean(121, 4.3);
    for i in 0..1000 {
        let x = i as f64 / 999.0;
        d &= frobenius_gap(&p, x).map(|g| g.holds()).unwrap_or(false);
        d &= frobenius_gap(&q, x).map(|g| g.holds()).unwrap_or(false);
    }
    (
        a && b && c && d,
        format!(
            "(a) 50 coefficients, worst |closed - quad| {worst_a:.1e} {a}; (b) strictly decreasing {b}; (c) ×4 band {c} [{}]; (d) Frobenius exact ≤ bound at 2x1000 points {d}",
            detail.join("; ")
        ),
    )
}

fn c9_required_k() -> Outcome {
    let expected = [(13.0, 3u32), (40.0, 4), (1.0, 1)];
    let mut ok = true;
    let mut got = Vec::new();
    for (w, k) in expected {
        let r = required_k_ternary(w).unwrap();
        ok &= r == k;
        got.push(format!("{w} -> {r}"));
    }
    for w in [0.5, 1.0, 2.0, 13.0, 13.5, 40.0, 40.5, 1000.0, 1e9] {
        let k = required_k_ternary(w).unwrap();
        let reach = |k: u32| ternary_reach(3u128.pow(k));
        ok &= w <= reach(k) && (k == 1 || reach(k - 1) < w);
    }
    (
        ok,
        format!(
            "{}; sandwich (3^(k-1)-1)/2 < w ≤ (3^k-1)/2 verified",
            got.join(", ")
        ),
    )
}

fn c10_determinism() -> Outcome {
    let mut manifests = Vec::new();
    for suite in [
        Suite::Reachability,
        Suite::ShiftSweep,
        Suite::Flight,
        Suite::GradSweep,
    ] {
        let mut m = ExperimentManifest::for_suite(suite, SEED);
        m.iterations = 30;
        m.record_every = 10;
        m.counts = RunCounts {
            targets: 2,
            seeds: 2,
        };
        m.learning_rates = vec![0.01];
        m.shift_means = if suite == Suite::ShiftSweep {
            vec![0.0, 9.0]
        } else {
            Vec::new()
        };
        if suite == Suite::GradSweep {
            m.alpha_grid = vec![1.0, 5.0, 11.0, 13.0];
        }
        manifests.push(m);
    }
    let mut identical = true;
    let mut sizes = Vec::new();
    for m in &manifests {
        let bytes: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let report = run_manifest(m, &RunOptions::in_dir(dir.path())).unwrap();
                let path =
                    fourier_vqc::experiments::emit_report(&report, ReportFormat::Json, dir.path())
                        .unwrap();
                std::fs::read(path).unwrap()
            })
            .collect();
        identical &= bytes[0] == bytes[1];
        sizes.push(format!("{}: {} bytes", m.suite, bytes[0].len()));
    }
    (
        identical,
        format!(
            "two fresh runs per suite byte-identical: {identical} ({})",
            sizes.join(", ")
        ),
    )
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        (false, format!("panicked: {msg}"))
    })
}

fn main() {
    let started = Instant::now();
    let opts = RunOptions::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = guarded(f);
        let secs = t.elapsed().as_secs_f64();
        println!(
            "{} [{id}] {name}: {} ({secs:.1}s)",
            if out.0 { "PASS" } else { "FAIL" },
            out.1
        );
        results.push((id, name, out, secs));
    };

    timed(1, "gradient oracle", &mut c1_gradient_oracle);
    timed(2, "spectrum oracle", &mut c2_spectrum_oracle);
    let mut c34 = None;
    timed(3, "reachability reproduction", &mut || {
        let (c3, c4) = c3_c4(&opts);
        c34 = Some(c4);
        c3
    });
    timed(4, "displacement bound", &mut || {
        c34.take()
            .unwrap_or((false, "reachability suite failed".into()))
    });
    timed(5, "gradient locality", &mut || c5_gradient_locality(&opts));
    timed(6, "shift sweep", &mut || c6_shift_sweep(&opts));
    timed(7, "flight passengers", &mut || c7_flight(&opts));
    timed(8, "cesaro suite", &mut c8_cesaro);
    timed(9, "required-k exactness", &mut c9_required_k);
    timed(10, "determinism", &mut c10_determinism);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2 .0).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed.len(),
        results.len(),
        started.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
