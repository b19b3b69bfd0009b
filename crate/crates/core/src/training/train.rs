use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::metrics::r2_score;
use crate::data::Samples;
use crate::error::{Error, Result};
use crate::gradients::{loss_and_grad_prepared, mse};
use crate::model::Model;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    #[serde(flatten)]
    pub adam: AdamConfig,
    pub seed: u64,
    /// Stride between recorded loss/prefactor snapshots.
    pub record_every: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            iterations: 5000,
            adam: AdamConfig::default(),
            seed: 0,
            record_every: 10,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate {} must be positive",
                self.learning_rate
            )));
        }
        if self.iterations < 1 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        if self.record_every < 1 {
            return Err(Error::Config("record_every must be at least 1".into()));
        }
        let in_unit = |b: f64| b > 0.0 && b < 1.0;
        if !in_unit(self.adam.beta1) || !in_unit(self.adam.beta2) {
            return Err(Error::Config("Adam betas must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSeeds {
    pub target: u64,
    pub weight: u64,
}

/// Outcome of one training run.
///
/// `alpha_trajectory[j]` is the series of prefactor `j` at `recorded_iterations`
/// (column layout). Iteration `i` means "before the i-th update"; the last
/// entry is always the final model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seeds: RunSeeds,
    pub train_config: TrainConfig,
    pub recorded_iterations: Vec<usize>,
    pub loss_curve: Vec<f64>,
    pub alpha_trajectory: Vec<Vec<f64>>,
    pub initial_alpha: Vec<f64>,
    pub final_loss: f64,
    pub final_model: Model,
    /// `None` when the split's targets are constant.
    pub r2_train: Option<f64>,
    pub r2_test: Option<f64>,
}

impl RunRecord {
    pub fn final_alpha(&self) -> &[f64] {
        self.final_model.alpha()
    }

    pub fn displacements(&self) -> Vec<f64> {
        self.initial_alpha
            .iter()
            .zip(self.final_alpha())
            .map(|(a, b)| (b - a).abs())
            .collect()
    }
}

fn score(model_out: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    if ys.is_empty() {
        return Ok(None);
    }
    match r2_score(model_out, ys) {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedMetric(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Full-batch Adam on the mean squared error.
///
/// Parameters are packed as `[alpha..., theta_0..., theta_1..., ...]`; fixed
/// initialization kinds leave `alpha` out of the optimizer entirely.
pub fn train(
    model: &Model,
    train_set: &Samples,
    test_set: &Samples,
    cfg: &TrainConfig,
    seeds: RunSeeds,
) -> Result<RunRecord> {
    cfg.validate()?;
    if train_set.is_empty() {
        return Err(Error::Config("empty training split".into()));
    }
    let train_alpha = model.config().init.trainable();
    let k = model.alpha().len();
    let block = model.config().block_params();
    let mut alpha = model.alpha().to_vec();
    let mut theta: Vec<f64> = model.theta().concat();

    let offset = if train_alpha { k } else { 0 };
    let mut params = vec![0.0; offset + theta.len()];
    let mut grads = vec![0.0; params.len()];
    let mut adam = AdamState::new(params.len());

    let rebuild = |alpha: &[f64], theta: &[f64]| -> Result<Model> {
        Model::new(
            model.config().clone(),
            alpha.to_vec(),
            theta.chunks(block).map(<[f64]>::to_vec).collect(),
        )
    };

    let mut recorded_iterations = Vec::new();
    let mut loss_curve = Vec::new();
    let mut alpha_trajectory = vec![Vec::new(); k];
    let mut record = |it: usize, loss: f64, alpha: &[f64]| {
        recorded_iterations.push(it);
        loss_curve.push(loss);
        for (series, &a) in alpha_trajectory.iter_mut().zip(alpha) {
            series.push(a);
        }
    };

    for it in 0..cfg.iterations {
        let circuit = rebuild(&alpha, &theta)?.prepare()?;
        let (loss, grad) = loss_and_grad_prepared(&circuit, &train_set.xs, &train_set.ys)
            .map_err(|e| Error::Numeric(format!("iteration {it}: {e}")))?;
        if it % cfg.record_every == 0 {
            record(it, loss, &alpha);
        }

        if train_alpha {
            params[..k].copy_from_slice(&alpha);
            grads[..k].copy_from_slice(&grad.d_alpha);
        }
        params[offset..].copy_from_slice(&theta);
        for (dst, src) in grads[offset..].chunks_mut(block).zip(&grad.d_theta) {
            dst.copy_from_slice(src);
        }
        adam.step(&mut params, &grads, cfg.learning_rate, &cfg.adam)?;
        if train_alpha {
            alpha.copy_from_slice(&params[..k]);
        }
        theta.copy_from_slice(&params[offset..]);
    }

    let final_model = rebuild(&alpha, &theta)?;
    let circuit = final_model.prepare()?;
    let final_loss = mse(&circuit, &train_set.xs, &train_set.ys);
    if !final_loss.is_finite() {
        return Err(Error::Numeric("final loss is not finite".into()));
    }
    record(cfg.iterations, final_loss, &alpha);

    let r2_train = score(&circuit.eval_many(&train_set.xs), &train_set.ys)?;
    let r2_test = score(&circuit.eval_many(&test_set.xs), &test_set.ys)?;
    Ok(RunRecord {
        seeds,
        train_config: cfg.clone(),
        recorded_iterations,
        loss_curve,
        alpha_trajectory,
        initial_alpha: model.alpha().to_vec(),
        final_loss,
        final_model,
        r2_train,
        r2_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, CircuitConfig, InitKind, InitStrategy};

    fn small_problem() -> (Samples, Samples) {
        let xs: Vec<f64> = (0..12).map(|i| -3.0 + 0.5 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 0.6 * (1.5 * x).cos()).collect();
        let train = Samples {
            xs: xs[..9].to_vec(),
            ys: ys[..9].to_vec(),
        };
        let test = Samples {
            xs: xs[9..].to_vec(),
            ys: ys[9..].to_vec(),
        };
        (train, test)
    }

    fn cfg(iterations: usize) -> TrainConfig {
        TrainConfig {
            learning_rate: 0.01,
            iterations,
            record_every: 5,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn fixed_kinds_never_move_alpha() {
        let (train_set, test_set) = small_problem();
        let m = build_model(
            CircuitConfig::parallel(2, InitStrategy::new(InitKind::TernaryFixed)),
            0,
        )
        .unwrap();
        let r = train(
            &m,
            &train_set,
            &test_set,
            &cfg(20),
            RunSeeds {
                target: 0,
                weight: 0,
            },
        )
        .unwrap();
        assert_eq!(r.final_alpha(), &[1.0, 3.0]);
        for (j, series) in r.alpha_trajectory.iter().enumerate() {
            assert!(series.iter().all(|&a| a == m.alpha()[j]));
        }
        assert!(r.displacements().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn trainable_kinds_move_alpha_and_reduce_loss() {
        let (train_set, test_set) = small_problem();
        let m = build_model(
            CircuitConfig::parallel(2, InitStrategy::new(InitKind::UnaryTrainable)),
            0,
        )
        .unwrap();
        let r = train(
            &m,
            &train_set,
            &test_set,
            &cfg(60),
            RunSeeds {
                target: 0,
                weight: 0,
            },
        )
        .unwrap();
        assert_ne!(r.final_alpha(), m.alpha());
        assert!(r.final_loss < r.loss_curve[0]);
        assert_eq!(r.recorded_iterations.first(), Some(&0));
        assert_eq!(r.recorded_iterations.last(), Some(&60));
        assert_eq!(r.loss_curve.len(), 13);
        assert!(r.r2_train.unwrap() <= 1.0);
    }

    #[test]
    fn deterministic() {
        let (train_set, test_set) = small_problem();
        let m = build_model(
            CircuitConfig::parallel(2, InitStrategy::new(InitKind::UnaryTrainable)),
            0,
        )
        .unwrap();
        let seeds = RunSeeds {
            target: 1,
            weight: 2,
        };
        let a = train(&m, &train_set, &test_set, &cfg(15), seeds).unwrap();
        let b = train(&m, &train_set, &test_set, &cfg(15), seeds).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn rejects_bad_config() {
        let (train_set, test_set) = small_problem();
        let m = build_model(
            CircuitConfig::parallel(1, InitStrategy::new(InitKind::UnaryTrainable)),
            0,
        )
        .unwrap();
        let seeds = RunSeeds {
            target: 0,
            weight: 0,
        };
        let mut c = cfg(5);
        c.learning_rate = 0.0;
        assert!(train(&m, &train_set, &test_set, &c, seeds).is_err());
        assert!(train(&m, &Samples::default(), &test_set, &cfg(5), seeds).is_err());
    }
}
