use std::fs;

use fourier_vqc::experiments::{
    emit_report, run_gradient_sweep, run_manifest, AggregateReport, ExperimentManifest,
    ReportFormat, RunCounts, RunOptions, Suite,
};

fn tiny(suite: Suite) -> ExperimentManifest {
    let mut m = ExperimentManifest::for_suite(suite, 42);
    m.iterations = 4;
    m.record_every = 2;
    m.counts = RunCounts {
        targets: 1,
        seeds: 2,
    };
    m.learning_rates = vec![0.01];
    if suite == Suite::ShiftSweep {
        m.shift_means = vec![0.0, 4.0];
        m.strategies.truncate(2);
    }
    if suite == Suite::GradSweep {
        m.alpha_grid = vec![1.0, 6.0, 11.0];
    }
    m
}

fn series_per_panel(svg: &str) -> Vec<String> {
    let doc = roxmltree::Document::parse(svg).expect("well-formed SVG");
    let panel = doc
        .descendants()
        .find(|n| n.attribute("id") == Some("summary"))
        .expect("summary panel");
    panel
        .children()
        .filter(|n| n.attribute("class") == Some("series"))
        .map(|n| n.attribute("data-strategy").unwrap_or_default().to_string())
        .collect()
}

#[test]
fn empty_report_gives_header_only_csv() {
    let mut m = tiny(Suite::Flight);
    m.counts.seeds = 0;
    let report = run_manifest(&m, &RunOptions::default()).unwrap();
    assert!(report.runs.is_empty() && report.groups.is_empty());
    let dir = tempfile::tempdir().unwrap();
    let path = emit_report(&report, ReportFormat::Csv, dir.path()).unwrap();
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("key,family,strategy"));
    assert!(emit_report(&report, ReportFormat::Svg, dir.path()).is_err());
}

#[test]
fn json_round_trip_and_csv_rows() {
    let m = tiny(Suite::Reachability);
    let report = run_manifest(&m, &RunOptions::default()).unwrap();
    assert_eq!(report.runs.len(), m.runs().unwrap().len());
    let back = AggregateReport::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(
        report.to_csv().unwrap().lines().count(),
        report.runs.len() + 1
    );
    for g in &report.groups {
        assert_eq!(g.runs, m.counts.total());
        let s = g.r2_test.as_ref().unwrap();
        assert!(s.q25 <= s.median && s.median <= s.q75);
    }
}

#[test]
fn svg_has_one_series_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    for suite in [Suite::Reachability, Suite::ShiftSweep] {
        let m = tiny(suite);
        let report = run_manifest(&m, &RunOptions::default()).unwrap();
        let svg = fs::read_to_string(emit_report(&report, ReportFormat::Svg, dir.path()).unwrap())
            .unwrap();
        let labels: Vec<String> = m
            .strategies
            .iter()
            .map(|s| s.kind.label().to_string())
            .collect();
        assert_eq!(series_per_panel(&svg), labels, "{suite}");
    }
    let sweep = run_gradient_sweep(&tiny(Suite::GradSweep), &RunOptions::default()).unwrap();
    let svg =
        fs::read_to_string(emit_report(&sweep, ReportFormat::Svg, dir.path()).unwrap()).unwrap();
    assert_eq!(series_per_panel(&svg), ["unary_trainable"]);
    let csv =
        fs::read_to_string(emit_report(&sweep, ReportFormat::Csv, dir.path()).unwrap()).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn reruns_reuse_cached_runs_and_match_byte_for_byte() {
    let m = tiny(Suite::Flight);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let first = run_manifest(&m, &RunOptions::in_dir(a.path())).unwrap();
    let fresh = run_manifest(&m, &RunOptions::in_dir(b.path())).unwrap();
    assert_eq!(first.to_json().unwrap(), fresh.to_json().unwrap());
    let ja = fs::read(emit_report(&first, ReportFormat::Json, a.path()).unwrap()).unwrap();
    let jb = fs::read(emit_report(&fresh, ReportFormat::Json, b.path()).unwrap()).unwrap();
    assert_eq!(ja, jb);
    assert_eq!(
        fs::read(a.path().join("runs.jsonl")).unwrap(),
        fs::read(b.path().join("runs.jsonl")).unwrap()
    );

    // Plant a marker in one cached run; the rerun must pick it up instead of retraining.
    let cached = fs::read_dir(a.path().join("runs"))
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&cached).unwrap()).unwrap();
    v["record"]["r2_test"] = serde_json::json!(-123.0);
    fs::write(&cached, serde_json::to_string(&v).unwrap()).unwrap();
    let again = run_manifest(&m, &RunOptions::in_dir(a.path())).unwrap();
    assert!(again.runs.iter().any(|r| r.r2_test == Some(-123.0)));
    assert_eq!(again.runs.len(), first.runs.len());
}

#[test]
fn suite_mismatch_is_a_config_error() {
    let m = tiny(Suite::Flight);
    assert!(fourier_vqc::experiments::run_reachability(&m, &RunOptions::default()).is_err());
}
