use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{DataSource, ExperimentManifest, RunDescriptor, Suite};
use super::report::AggregateReport;
use crate::data::{
    flight_passengers_bundled, load_flight_passengers, make_target, sample_dataset, split, Dataset,
};
use crate::error::{Error, Result};
use crate::gradients::gradient_sweep;
use crate::model::{build_model, CircuitConfig, InitStrategy};
use crate::training::{train, RunRecord, RunSeeds, TrainConfig};

/// Where finished runs are cached, and whether to print progress to stderr.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub progress: bool,
}

impl RunOptions {
    pub fn in_dir(dir: impl Into<PathBuf>) -> Self {
        RunOptions {
            out_dir: Some(dir.into()),
            progress: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunResult {
    Completed { record: Box<RunRecord> },
    Failed { message: String },
}

/// What a worker hands back for one descriptor; also the cache file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub key: String,
    pub descriptor: RunDescriptor,
    #[serde(flatten)]
    pub result: RunResult,
}

impl RunOutcome {
    pub fn record(&self) -> Option<&RunRecord> {
        match &self.result {
            RunResult::Completed { record } => Some(record),
            RunResult::Failed { .. } => None,
        }
    }
}

fn load_source(source: &DataSource) -> Result<Dataset> {
    match source {
        DataSource::Synthetic {
            frequencies,
            coefficient_seed,
            samples,
        } => sample_dataset(&make_target(frequencies, *coefficient_seed), *samples),
        DataSource::Flight { path: None } => Ok(flight_passengers_bundled()?.dataset),
        DataSource::Flight { path: Some(p) } => load_flight_passengers(p)
            .map(|f| f.dataset)
            .map_err(|e| match e {
                Error::Io { path, source } => Error::Io {
                    path: PathBuf::from(format!(
                        "{} (download the monthly airline passenger series as Month,Passengers CSV, \
                         or omit the path to use the bundled copy)",
                        path.display()
                    )),
                    source,
                },
                other => other,
            }),
    }
}

fn config_for(d: &RunDescriptor) -> CircuitConfig {
    CircuitConfig::parallel(d.qubits, d.init.clone())
}

/// Train one descriptor. Data errors (for example a missing flight file) are
/// returned; numerical failures inside training become `Failed`.
pub fn execute_run(d: &RunDescriptor) -> Result<RunOutcome> {
    let data = load_source(&d.source)?;
    let parts = split(&data, d.train_ratio, d.split_seed)?;
    let model = build_model(config_for(d), d.split_seed)?;
    let cfg = TrainConfig {
        learning_rate: d.learning_rate,
        iterations: d.iterations,
        seed: d.split_seed,
        record_every: d.record_every,
        ..TrainConfig::default()
    };
    let seeds = RunSeeds {
        target: match d.source {
            DataSource::Synthetic {
                coefficient_seed, ..
            } => coefficient_seed,
            DataSource::Flight { .. } => 0,
        },
        weight: d.split_seed,
    };
    let result = match train(
        &model,
        &parts.train_samples(&data),
        &parts.test_samples(&data),
        &cfg,
        seeds,
    ) {
        Ok(record) => RunResult::Completed {
            record: Box::new(record),
        },
        Err(e @ (Error::Io { .. } | Error::Config(_))) => return Err(e),
        Err(e) => RunResult::Failed {
            message: e.to_string(),
        },
    };
    Ok(RunOutcome {
        key: d.key(),
        descriptor: d.clone(),
        result,
    })
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    dir.join("runs").join(format!("{key}.json"))
}

fn read_cached(dir: &Path, d: &RunDescriptor) -> Option<RunOutcome> {
    let text = fs::read_to_string(cache_path(dir, &d.key())).ok()?;
    let mut outcome: RunOutcome = serde_json::from_str(&text).ok()?;
    outcome.descriptor.ordinal = d.ordinal;
    (outcome.descriptor == *d).then_some(outcome)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Execute descriptors across the rayon pool, reusing cached outcomes.
/// Outcomes come back in descriptor order.
pub fn execute_all(runs: &[RunDescriptor], opts: &RunOptions) -> Result<Vec<RunOutcome>> {
    if let Some(dir) = &opts.out_dir {
        let runs_dir = dir.join("runs");
        fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    }
    let total = runs.len();
    let outcomes = runs
        .par_iter()
        .map(|d| {
            if let Some(hit) = opts.out_dir.as_deref().and_then(|dir| read_cached(dir, d)) {
                return Ok(hit);
            }
            let outcome = execute_run(d)?;
            if let Some(dir) = &opts.out_dir {
                write_json(&cache_path(dir, &outcome.key), &outcome)?;
            }
            if opts.progress {
                let r2 = outcome.record().and_then(|r| r.r2_test);
                eprintln!(
                    "[{}/{total}] {} {} test R2 {:?}",
                    d.ordinal + 1,
                    d.group,
                    d.key(),
                    r2
                );
            }
            Ok(outcome)
        })
        .collect::<Result<Vec<_>>>()?;

    if let Some(dir) = &opts.out_dir {
        let path = dir.join("runs.jsonl");
        let mut lines = Vec::new();
        for o in &outcomes {
            serde_json::to_writer(&mut lines, o)?;
            lines.push(b'\n');
        }
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        f.write_all(&lines).map_err(|e| Error::io(&path, e))?;
    }
    Ok(outcomes)
}

fn run_suite(
    manifest: &ExperimentManifest,
    expected: Suite,
    opts: &RunOptions,
) -> Result<AggregateReport> {
    if manifest.suite != expected {
        return Err(Error::Config(format!(
            "manifest is for the {} suite, not {expected}",
            manifest.suite
        )));
    }
    let runs = manifest.runs()?;
    let outcomes = execute_all(&runs, opts)?;
    if let Some(dir) = &opts.out_dir {
        write_json(&dir.join("manifest.json"), manifest)?;
    }
    Ok(AggregateReport::from_outcomes(manifest, outcomes))
}

pub fn run_reachability(
    manifest: &ExperimentManifest,
    opts: &RunOptions,
) -> Result<AggregateReport> {
    run_suite(manifest, Suite::Reachability, opts)
}

pub fn run_shift_sweep(
    manifest: &ExperimentManifest,
    opts: &RunOptions,
) -> Result<AggregateReport> {
    run_suite(manifest, Suite::ShiftSweep, opts)
}

pub fn run_flight(manifest: &ExperimentManifest, opts: &RunOptions) -> Result<AggregateReport> {
    run_suite(manifest, Suite::Flight, opts)
}

/// One sweep over `alpha_grid` on the first family, first target and split.
pub fn run_gradient_sweep(
    manifest: &ExperimentManifest,
    opts: &RunOptions,
) -> Result<AggregateReport> {
    if manifest.suite != Suite::GradSweep {
        return Err(Error::Config(format!(
            "manifest is for the {} suite",
            manifest.suite
        )));
    }
    manifest.validate()?;
    let m = manifest.master_seed;
    let family = &manifest.families[0];
    let target = make_target(
        &family.frequencies,
        crate::rng::derive_seed(m, "target", &[0, 0]),
    );
    let strategy = manifest
        .strategies
        .first()
        .cloned()
        .unwrap_or_else(|| InitStrategy::new(crate::model::InitKind::UnaryTrainable));
    let config = CircuitConfig::parallel(manifest.qubits, strategy);
    let lr = manifest.learning_rates[0];
    let sweep = gradient_sweep(
        &target,
        &manifest.alpha_grid,
        &config,
        lr,
        crate::rng::derive_seed(m, "split", &[0, 0, 0]),
    )?;
    if let Some(dir) = &opts.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_json(&dir.join("manifest.json"), manifest)?;
    }
    let mut report = AggregateReport::from_outcomes(manifest, Vec::new());
    report.gradient_sweep = Some(sweep);
    Ok(report)
}

pub fn run_manifest(manifest: &ExperimentManifest, opts: &RunOptions) -> Result<AggregateReport> {
    match manifest.suite {
        Suite::Reachability => run_reachability(manifest, opts),
        Suite::ShiftSweep => run_shift_sweep(manifest, opts),
        Suite::Flight => run_flight(manifest, opts),
        Suite::GradSweep => run_gradient_sweep(manifest, opts),
    }
}
