//! Experiment suites: manifests, cached parallel execution, aggregation and
//! CSV/JSON/SVG reports.
//!
//! A suite's output directory holds `runs/<key>.json` for every finished run
//! (`key` hashes the run descriptor), `runs.jsonl`, `manifest.json` and the
//! emitted reports. Rerunning into the same directory reuses cached runs.

mod manifest;
mod report;
mod runner;
mod svg;

pub use manifest::{
    perturbed_unary, DataSource, ExperimentManifest, GroupKey, RunCounts, RunDescriptor, Suite,
    TargetFamily, OMEGA_1, OMEGA_2,
};
pub use report::{emit_report, AggregateReport, GroupSummary, ReportFormat, RunRow};
pub use runner::{
    execute_all, execute_run, run_flight, run_gradient_sweep, run_manifest, run_reachability,
    run_shift_sweep, RunOptions, RunOutcome, RunResult,
};
