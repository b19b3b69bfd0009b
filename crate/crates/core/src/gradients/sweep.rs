use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::loss_and_grad_prepared;
use crate::data::{sample_dataset, split, TargetSpec};
use crate::error::{Error, Result};
use crate::model::{build_model, CircuitConfig, InitStrategy};
use crate::training::{AdamConfig, AdamState};

/// Samples drawn from the target before the 80/20 split.
pub const SWEEP_SAMPLES: usize = 100;
pub const SWEEP_TRAIN_RATIO: f64 = 0.8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha0: f64,
    /// Prefactor gradient after the first optimizer step, one per encoding gate.
    pub d_alpha: Vec<f64>,
    pub mean_abs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientSweep {
    pub learning_rate: f64,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

impl GradientSweep {
    /// Mean of `mean_abs` over rows with `lo <= alpha0 <= hi`.
    pub fn window_mean(&self, lo: f64, hi: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.alpha0 >= lo && r.alpha0 <= hi)
            .map(|r| r.mean_abs)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }
}

/// Samples the target on the standard grid, splits with `seed`, and sweeps.
pub fn gradient_sweep(
    target: &TargetSpec,
    alpha_grid: &[f64],
    config: &CircuitConfig,
    lr: f64,
    seed: u64,
) -> Result<GradientSweep> {
    let data = sample_dataset(target, SWEEP_SAMPLES)?;
    let parts = split(&data, SWEEP_TRAIN_RATIO, seed)?;
    let train = parts.train_samples(&data);
    let mut sweep = gradient_sweep_on(&train.xs, &train.ys, alpha_grid, config, lr)?;
    sweep.seed = seed;
    Ok(sweep)
}

/// For every grid value: all prefactors set to it, one full-batch Adam step,
/// then the prefactor gradient at the updated parameters.
pub fn gradient_sweep_on(
    xs: &[f64],
    ys: &[f64],
    alpha_grid: &[f64],
    config: &CircuitConfig,
    lr: f64,
) -> Result<GradientSweep> {
    if alpha_grid.is_empty() {
        return Err(Error::Config("empty prefactor grid".into()));
    }
    let rows = alpha_grid
        .par_iter()
        .map(|&a0| sweep_point(xs, ys, a0, config, lr))
        .collect::<Result<Vec<_>>>()?;
    Ok(GradientSweep {
        learning_rate: lr,
        seed: 0,
        rows,
    })
}

fn sweep_point(
    xs: &[f64],
    ys: &[f64],
    alpha0: f64,
    config: &CircuitConfig,
    lr: f64,
) -> Result<SweepRow> {
    let k = config.encoding_gates;
    let mut cfg = config.clone();
    cfg.init = InitStrategy::with_prefactors(config.init.kind, vec![alpha0; k]);
    let model = build_model(cfg, 0)?;

    let (_, grad) = loss_and_grad_prepared(&model.prepare()?, xs, ys)?;
    let train_alpha = model.config().init.trainable();
    let mut params: Vec<f64> = Vec::new();
    let mut grads: Vec<f64> = Vec::new();
    if train_alpha {
        params.extend_from_slice(model.alpha());
        grads.extend_from_slice(&grad.d_alpha);
    }
    params.extend(model.theta().iter().flatten());
    grads.extend(grad.d_theta.iter().flatten());
    AdamState::new(params.len()).step(&mut params, &grads, lr, &AdamConfig::default())?;

    let (alpha, theta) = if train_alpha {
        params.split_at(k)
    } else {
        (model.alpha(), &params[..])
    };
    let block = model.config().block_params();
    let stepped = model
        .with_alpha(alpha.to_vec())?
        .with_theta(theta.chunks(block).map(<[f64]>::to_vec).collect())?;
    let (_, grad) = loss_and_grad_prepared(&stepped.prepare()?, xs, ys)?;
    let mean_abs = grad.d_alpha.iter().map(|g| g.abs()).sum::<f64>() / k as f64;
    Ok(SweepRow {
        alpha0,
        d_alpha: grad.d_alpha,
        mean_abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::make_target;
    use crate::model::InitKind;

    fn cfg() -> CircuitConfig {
        CircuitConfig::parallel(2, InitStrategy::new(InitKind::UnaryTrainable))
    }

    #[test]
    fn zero_residual_gives_flat_zeros() {
        let xs: Vec<f64> = (0..8).map(|i| -3.0 + 0.8 * i as f64).collect();
        // Targets produced by the swept model itself: zero residual at init.
        let grid = [0.5];
        let mut c = cfg();
        c.init = InitStrategy::with_prefactors(InitKind::UnaryTrainable, vec![0.5; 2]);
        let model = build_model(c.clone(), 0).unwrap();
        let circuit = model.prepare().unwrap();
        let ys = circuit.eval_many(&xs);
        let (loss, grad) = loss_and_grad_prepared(&circuit, &xs, &ys).unwrap();
        assert_eq!(loss, 0.0);
        assert!(grad.max_abs() < 1e-14);
        let s = gradient_sweep_on(&xs, &ys, &grid, &c, 1e-12).unwrap();
        assert!(s.rows[0].mean_abs < 1e-9);
    }

    #[test]
    fn reproducible() {
        let t = make_target(&[2.0, 3.0], 7);
        let grid = [1.0, 2.0, 3.0];
        let a = gradient_sweep(&t, &grid, &cfg(), 0.001, 3).unwrap();
        let b = gradient_sweep(&t, &grid, &cfg(), 0.001, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.rows.len(), 3);
        assert!(a.window_mean(1.5, 3.0).is_some());
    }

    #[test]
    fn empty_grid_errors() {
        let t = make_target(&[2.0], 1);
        assert!(gradient_sweep(&t, &[], &cfg(), 0.001, 0).is_err());
    }
}
