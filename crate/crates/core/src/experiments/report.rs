use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::manifest::{ExperimentManifest, GroupKey, Suite};
use super::runner::{RunOutcome, RunResult};
use super::svg;
use crate::error::{Error, Result};
use crate::gradients::GradientSweep;
use crate::training::Summary;

/// Per-run row of the report; trajectories are kept, the trained model is not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub key: String,
    pub group: GroupKey,
    pub target_index: usize,
    pub seed_index: usize,
    pub failure: Option<String>,
    pub r2_train: Option<f64>,
    pub r2_test: Option<f64>,
    pub final_loss: Option<f64>,
    pub initial_alpha: Vec<f64>,
    pub final_alpha: Vec<f64>,
    pub recorded_iterations: Vec<usize>,
    pub loss_curve: Vec<f64>,
    pub alpha_trajectory: Vec<Vec<f64>>,
}

impl RunRow {
    fn from_outcome(o: RunOutcome) -> Self {
        let d = o.descriptor;
        let mut row = RunRow {
            key: o.key,
            group: d.group,
            target_index: d.target_index,
            seed_index: d.seed_index,
            failure: None,
            r2_train: None,
            r2_test: None,
            final_loss: None,
            initial_alpha: Vec::new(),
            final_alpha: Vec::new(),
            recorded_iterations: Vec::new(),
            loss_curve: Vec::new(),
            alpha_trajectory: Vec::new(),
        };
        match o.result {
            RunResult::Failed { message } => row.failure = Some(message),
            RunResult::Completed { record } => {
                let r = *record;
                row.r2_train = r.r2_train;
                row.r2_test = r.r2_test;
                row.final_loss = Some(r.final_loss);
                row.final_alpha = r.final_model.alpha().to_vec();
                row.initial_alpha = r.initial_alpha;
                row.recorded_iterations = r.recorded_iterations;
                row.loss_curve = r.loss_curve;
                row.alpha_trajectory = r.alpha_trajectory;
            }
        }
        row
    }

    pub fn displacements(&self) -> impl Iterator<Item = f64> + '_ {
        self.initial_alpha
            .iter()
            .zip(&self.final_alpha)
            .map(|(a, b)| (b - a).abs())
    }
}

/// Pooled statistics for all runs sharing a [`GroupKey`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub group: GroupKey,
    pub runs: usize,
    pub failed: usize,
    pub r2_test: Option<Summary>,
    pub r2_train: Option<Summary>,
    /// `|Δα|` pooled over every prefactor of every completed run.
    pub displacement: Option<Summary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub suite: Suite,
    pub manifest: ExperimentManifest,
    pub groups: Vec<GroupSummary>,
    pub runs: Vec<RunRow>,
    pub gradient_sweep: Option<GradientSweep>,
}

impl AggregateReport {
    /// Groups appear in first-seen order of the (ordinal-sorted) runs.
    pub fn from_outcomes(manifest: &ExperimentManifest, mut outcomes: Vec<RunOutcome>) -> Self {
        outcomes.sort_by_key(|o| o.descriptor.ordinal);
        let runs: Vec<RunRow> = outcomes.into_iter().map(RunRow::from_outcome).collect();
        let mut keys: Vec<&GroupKey> = Vec::new();
        for r in &runs {
            if !keys.contains(&&r.group) {
                keys.push(&r.group);
            }
        }
        let groups = keys
            .into_iter()
            .map(|key| {
                let members: Vec<&RunRow> = runs.iter().filter(|r| &r.group == key).collect();
                let collect = |f: fn(&RunRow) -> Option<f64>| -> Vec<f64> {
                    members.iter().filter_map(|r| f(r)).collect()
                };
                let displacement: Vec<f64> =
                    members.iter().flat_map(|r| r.displacements()).collect();
                GroupSummary {
                    group: key.clone(),
                    runs: members.len(),
                    failed: members.iter().filter(|r| r.failure.is_some()).count(),
                    r2_test: Summary::of(&collect(|r| r.r2_test)),
                    r2_train: Summary::of(&collect(|r| r.r2_train)),
                    displacement: Summary::of(&displacement),
                }
            })
            .collect();
        AggregateReport {
            suite: manifest.suite,
            manifest: manifest.clone(),
            groups,
            runs,
            gradient_sweep: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
            && self
                .gradient_sweep
                .as_ref()
                .is_none_or(|s| s.rows.is_empty())
    }

    /// First group matching `family`, `strategy` label and learning rate, and `mu` if given.
    pub fn group(
        &self,
        family: &str,
        strategy: &str,
        lr: f64,
        mu: Option<f64>,
    ) -> Option<&GroupSummary> {
        self.groups.iter().find(|g| {
            g.group.family == family
                && g.group.strategy == strategy
                && g.group.learning_rate == lr
                && (mu.is_none() || g.group.mu == mu)
        })
    }

    pub fn median_r2_test(
        &self,
        family: &str,
        strategy: &str,
        lr: f64,
        mu: Option<f64>,
    ) -> Option<f64> {
        self.group(family, strategy, lr, mu)?
            .r2_test
            .as_ref()
            .map(|s| s.median)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One line per run, or one line per prefactor value for a gradient sweep.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Config(format!("csv encoding: {e}"));
        if let Some(sweep) = &self.gradient_sweep {
            w.write_record(["alpha0", "mean_abs_d_alpha", "d_alpha"])
                .map_err(csv_err)?;
            for r in &sweep.rows {
                w.write_record([
                    r.alpha0.to_string(),
                    r.mean_abs.to_string(),
                    join(&r.d_alpha),
                ])
                .map_err(csv_err)?;
            }
        } else {
            w.write_record([
                "key",
                "family",
                "strategy",
                "learning_rate",
                "mu",
                "target_index",
                "seed_index",
                "status",
                "r2_train",
                "r2_test",
                "final_loss",
                "initial_alpha",
                "final_alpha",
                "max_displacement",
            ])
            .map_err(csv_err)?;
            for r in &self.runs {
                let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                let max_disp = r
                    .displacements()
                    .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
                w.write_record([
                    r.key.clone(),
                    r.group.family.clone(),
                    r.group.strategy.clone(),
                    r.group.learning_rate.to_string(),
                    opt(r.group.mu),
                    r.target_index.to_string(),
                    r.seed_index.to_string(),
                    if r.failure.is_some() { "failed" } else { "ok" }.to_string(),
                    opt(r.r2_train),
                    opt(r.r2_test),
                    opt(r.final_loss),
                    join(&r.initial_alpha),
                    join(&r.final_alpha),
                    opt(max_disp),
                ])
                .map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Config(format!("csv encoding: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl ReportFormat {
    pub const ALL: [ReportFormat; 3] = [ReportFormat::Csv, ReportFormat::Json, ReportFormat::Svg];

    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Svg => "svg",
        }
    }
}

/// Writes `<dir>/<suite>.<ext>` and returns its path.
pub fn emit_report(report: &AggregateReport, format: ReportFormat, dir: &Path) -> Result<PathBuf> {
    let body = match format {
        ReportFormat::Csv => report.to_csv()?,
        ReportFormat::Json => report.to_json()?,
        ReportFormat::Svg => {
            if report.is_empty() {
                return Err(Error::Config("cannot plot an empty report".into()));
            }
            svg::render(report)
        }
    };
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(format!("{}.{}", report.suite.name(), format.extension()));
    fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
