use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::shift_spectrum;
use crate::error::{Error, Result};
use crate::model::{InitKind, InitStrategy};
use crate::rng::derive_seed;

pub const OMEGA_1: [f64; 3] = [1.0, 1.2, 3.0];
pub const OMEGA_2: [f64; 3] = [11.0, 11.2, 13.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Reachability,
    ShiftSweep,
    Flight,
    GradSweep,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Reachability => "reachability",
            Suite::ShiftSweep => "shift-sweep",
            Suite::Flight => "flight",
            Suite::GradSweep => "grad-sweep",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named set of target frequencies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetFamily {
    pub name: String,
    pub frequencies: Vec<f64>,
}

impl TargetFamily {
    pub fn new(name: &str, frequencies: &[f64]) -> Self {
        TargetFamily {
            name: name.to_string(),
            frequencies: frequencies.to_vec(),
        }
    }
}

/// `targets x seeds` runs for every configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCounts {
    pub targets: usize,
    pub seeds: usize,
}

impl RunCounts {
    pub fn total(self) -> usize {
        self.targets * self.seeds
    }
}

/// Parses `TxS` (e.g. `5x4`) or a single `N` meaning `NxN`.
impl FromStr for RunCounts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid run count {s:?}; expected N or TxS")))
        };
        let (targets, seeds) = match s.split_once(['x', 'X', '*']) {
            Some((t, r)) => (parse(t)?, parse(r)?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        Ok(RunCounts { targets, seeds })
    }
}

/// Everything needed to regenerate a suite. Every run is a pure function of
/// the manifest and its indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub suite: Suite,
    pub qubits: usize,
    pub strategies: Vec<InitStrategy>,
    /// Reachability families; for the shift sweep, the base spectrum.
    pub families: Vec<TargetFamily>,
    /// Means of the `N(mu, 1)` spectrum offsets (shift sweep only).
    pub shift_means: Vec<f64>,
    /// For the flight suite `targets` is ignored.
    pub counts: RunCounts,
    pub learning_rates: Vec<f64>,
    pub iterations: usize,
    pub record_every: usize,
    pub samples: usize,
    pub train_ratio: f64,
    /// Initial prefactor values for the gradient sweep.
    pub alpha_grid: Vec<f64>,
    pub master_seed: u64,
    /// Flight CSV; `None` selects the bundled copy.
    pub data_path: Option<PathBuf>,
}

fn strategy_set(kinds: &[InitKind]) -> Vec<InitStrategy> {
    kinds.iter().map(|&k| InitStrategy::new(k)).collect()
}

/// Unary-trainable start slightly off 1 so the prefactors are distinguishable.
pub fn perturbed_unary(k: usize) -> InitStrategy {
    InitStrategy::with_prefactors(
        InitKind::UnaryTrainable,
        (1..=k).map(|j| 1.0 + 0.01 * j as f64).collect(),
    )
}

impl ExperimentManifest {
    fn base(suite: Suite, master_seed: u64) -> Self {
        ExperimentManifest {
            suite,
            qubits: 3,
            strategies: Vec::new(),
            families: Vec::new(),
            shift_means: Vec::new(),
            counts: RunCounts {
                targets: 10,
                seeds: 10,
            },
            learning_rates: vec![0.001],
            iterations: 5000,
            record_every: 50,
            samples: 100,
            train_ratio: 0.8,
            alpha_grid: Vec::new(),
            master_seed,
            data_path: None,
        }
    }

    /// Ω₁ and Ω₂ under perturbed unary and ternary trainable initialization,
    /// across the learning-rate study.
    pub fn reachability(master_seed: u64) -> Self {
        ExperimentManifest {
            strategies: vec![
                perturbed_unary(3),
                InitStrategy::new(InitKind::TernaryTrainable),
            ],
            families: vec![
                TargetFamily::new("omega1", &OMEGA_1),
                TargetFamily::new("omega2", &OMEGA_2),
            ],
            learning_rates: vec![0.001, 0.01, 0.1],
            ..Self::base(Suite::Reachability, master_seed)
        }
    }

    /// Ω₁ plus `N(mu, 1)` offsets for `mu = 0..=9`, all four strategies.
    pub fn shift_sweep(master_seed: u64) -> Self {
        ExperimentManifest {
            strategies: strategy_set(&InitKind::ALL),
            families: vec![TargetFamily::new("omega1", &OMEGA_1)],
            shift_means: (0..10).map(f64::from).collect(),
            ..Self::base(Suite::ShiftSweep, master_seed)
        }
    }

    pub fn flight(master_seed: u64) -> Self {
        ExperimentManifest {
            qubits: 4,
            strategies: strategy_set(&InitKind::ALL),
            counts: RunCounts {
                targets: 1,
                seeds: 10,
            },
            ..Self::base(Suite::Flight, master_seed)
        }
    }

    /// Unary-trainable gradients for α₀ ∈ [1, 15] in steps of 0.25 on one Ω₂ target.
    pub fn grad_sweep(master_seed: u64) -> Self {
        ExperimentManifest {
            strategies: vec![InitStrategy::new(InitKind::UnaryTrainable)],
            families: vec![TargetFamily::new("omega2", &OMEGA_2)],
            counts: RunCounts {
                targets: 1,
                seeds: 1,
            },
            alpha_grid: (0..=56).map(|i| 1.0 + 0.25 * f64::from(i)).collect(),
            ..Self::base(Suite::GradSweep, master_seed)
        }
    }

    pub fn for_suite(suite: Suite, master_seed: u64) -> Self {
        match suite {
            Suite::Reachability => Self::reachability(master_seed),
            Suite::ShiftSweep => Self::shift_sweep(master_seed),
            Suite::Flight => Self::flight(master_seed),
            Suite::GradSweep => Self::grad_sweep(master_seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self
            .learning_rates
            .iter()
            .any(|&lr| !(lr > 0.0 && lr.is_finite()))
        {
            return fail(format!(
                "learning rates must be positive: {:?}",
                self.learning_rates
            ));
        }
        if self.iterations == 0 || self.record_every == 0 {
            return fail("iterations and record_every must be positive".into());
        }
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return fail(format!("train ratio {} not in (0, 1)", self.train_ratio));
        }
        if self.samples < 2 {
            return fail(format!("{} samples per target", self.samples));
        }
        match self.suite {
            Suite::Reachability if self.families.is_empty() => fail("no target families".into()),
            Suite::ShiftSweep if self.families.len() != 1 => {
                fail("the shift sweep takes exactly one base spectrum".into())
            }
            Suite::ShiftSweep if self.shift_means.is_empty() => fail("no shift means".into()),
            Suite::GradSweep if self.alpha_grid.is_empty() || self.families.is_empty() => {
                fail("the gradient sweep needs a prefactor grid and a target family".into())
            }
            _ => Ok(()),
        }
    }

    /// Every run of the suite, in report order.
    pub fn runs(&self) -> Result<Vec<RunDescriptor>> {
        self.validate()?;
        let mut out = Vec::new();
        let mut push = |group: GroupKey,
                        source: DataSource,
                        strategy: &InitStrategy,
                        lr: f64,
                        t: usize,
                        s: usize,
                        split_seed: u64| {
            out.push(RunDescriptor {
                ordinal: out.len(),
                suite: self.suite,
                group,
                qubits: self.qubits,
                init: strategy.clone(),
                source,
                learning_rate: lr,
                iterations: self.iterations,
                record_every: self.record_every,
                train_ratio: self.train_ratio,
                target_index: t,
                seed_index: s,
                split_seed,
            });
        };
        let m = self.master_seed;
        match self.suite {
            Suite::Reachability => {
                for (f, family) in self.families.iter().enumerate() {
                    for strategy in &self.strategies {
                        for &lr in &self.learning_rates {
                            for t in 0..self.counts.targets {
                                for s in 0..self.counts.seeds {
                                    let idx = [f as u64, t as u64, s as u64];
                                    push(
                                        GroupKey::new(&family.name, strategy, lr, None),
                                        self.synthetic(
                                            family.frequencies.clone(),
                                            derive_seed(m, "target", &idx[..2]),
                                        ),
                                        strategy,
                                        lr,
                                        t,
                                        s,
                                        derive_seed(m, "split", &idx),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Suite::ShiftSweep => {
                let base = &self.families[0];
                for (u, &mu) in self.shift_means.iter().enumerate() {
                    for strategy in &self.strategies {
                        for &lr in &self.learning_rates {
                            for t in 0..self.counts.targets {
                                let idx = [u as u64, t as u64];
                                let shifted = shift_spectrum(
                                    &base.frequencies,
                                    mu,
                                    derive_seed(m, "shift", &idx),
                                );
                                for s in 0..self.counts.seeds {
                                    push(
                                        GroupKey::new(&base.name, strategy, lr, Some(mu)),
                                        self.synthetic(
                                            shifted.frequencies.clone(),
                                            derive_seed(m, "shift-target", &idx),
                                        ),
                                        strategy,
                                        lr,
                                        t,
                                        s,
                                        derive_seed(
                                            m,
                                            "shift-split",
                                            &[u as u64, t as u64, s as u64],
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
            Suite::Flight => {
                for strategy in &self.strategies {
                    for &lr in &self.learning_rates {
                        for s in 0..self.counts.seeds {
                            push(
                                GroupKey::new("flight", strategy, lr, None),
                                DataSource::Flight {
                                    path: self.data_path.clone(),
                                },
                                strategy,
                                lr,
                                0,
                                s,
                                derive_seed(m, "flight-split", &[s as u64]),
                            );
                        }
                    }
                }
            }
            Suite::GradSweep => {}
        }
        Ok(out)
    }

    fn synthetic(&self, frequencies: Vec<f64>, coefficient_seed: u64) -> DataSource {
        DataSource::Synthetic {
            frequencies,
            coefficient_seed,
            samples: self.samples,
        }
    }
}

/// Runs sharing a key are pooled in the aggregate report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupKey {
    pub family: String,
    pub strategy: String,
    pub learning_rate: f64,
    pub mu: Option<f64>,
}

impl GroupKey {
    pub fn new(family: &str, strategy: &InitStrategy, lr: f64, mu: Option<f64>) -> Self {
        GroupKey {
            family: family.to_string(),
            strategy: strategy.kind.label().to_string(),
            learning_rate: lr,
            mu,
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/lr={}",
            self.family, self.strategy, self.learning_rate
        )?;
        if let Some(mu) = self.mu {
            write!(f, "/mu={mu}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    Synthetic {
        frequencies: Vec<f64>,
        coefficient_seed: u64,
        samples: usize,
    },
    Flight {
        path: Option<PathBuf>,
    },
}

/// One immutable unit of work.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunDescriptor {
    pub ordinal: usize,
    pub suite: Suite,
    pub group: GroupKey,
    pub qubits: usize,
    pub init: InitStrategy,
    pub source: DataSource,
    pub learning_rate: f64,
    pub iterations: usize,
    pub record_every: usize,
    pub train_ratio: f64,
    pub target_index: usize,
    pub seed_index: usize,
    pub split_seed: u64,
}

impl RunDescriptor {
    /// SHA-256 over the descriptor's JSON, excluding its position in the suite.
    pub fn key(&self) -> String {
        let mut d = self.clone();
        d.ordinal = 0;
        let bytes = serde_json::to_vec(&d).expect("descriptor serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_counts_parse() {
        assert_eq!(
            "5x4".parse::<RunCounts>().unwrap(),
            RunCounts {
                targets: 5,
                seeds: 4
            }
        );
        assert_eq!(
            "3".parse::<RunCounts>().unwrap(),
            RunCounts {
                targets: 3,
                seeds: 3
            }
        );
        assert!("x".parse::<RunCounts>().is_err());
    }

    #[test]
    fn default_run_counts() {
        let r = ExperimentManifest::reachability(0).runs().unwrap();
        assert_eq!(r.len(), 2 * 2 * 3 * 100);
        let s = ExperimentManifest::shift_sweep(0).runs().unwrap();
        assert_eq!(s.len(), 10 * 4 * 100);
        let f = ExperimentManifest::flight(0).runs().unwrap();
        assert_eq!(f.len(), 40);
        assert!(ExperimentManifest::grad_sweep(0).runs().unwrap().is_empty());
        assert_eq!(
            ExperimentManifest::grad_sweep(0).alpha_grid.last(),
            Some(&15.0)
        );
    }

    #[test]
    fn targets_are_shared_across_strategies_and_keys_are_unique() {
        let mut m = ExperimentManifest::reachability(7);
        m.counts = RunCounts {
            targets: 2,
            seeds: 2,
        };
        let runs = m.runs().unwrap();
        let mut keys: Vec<String> = runs.iter().map(RunDescriptor::key).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), runs.len());
        let same_target: Vec<&RunDescriptor> = runs
            .iter()
            .filter(|r| r.group.family == "omega2" && r.target_index == 1 && r.seed_index == 0)
            .collect();
        assert_eq!(same_target.len(), 6);
        assert!(same_target
            .windows(2)
            .all(|w| w[0].source == w[1].source && w[0].split_seed == w[1].split_seed));
    }

    #[test]
    fn manifest_round_trips() {
        let m = ExperimentManifest::shift_sweep(3);
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            serde_json::from_str::<ExperimentManifest>(&text).unwrap(),
            m
        );
    }

    #[test]
    fn zero_runs_is_valid() {
        let mut m = ExperimentManifest::flight(0);
        m.counts.seeds = 0;
        assert!(m.runs().unwrap().is_empty());
    }
}
