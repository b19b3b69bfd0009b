//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fourier_vqc::gradients::grad_forward;
use fourier_vqc::model::{forward, CircuitConfig, InitKind, InitStrategy, Layout, Model};
use fourier_vqc::quantum::{Pauli, C64};

pub const FD_STEP: f64 = 1e-5;
pub const FD_REL: f64 = 1e-4;
pub const FD_ABS: f64 = 1e-7;
pub const FD_SMALL: f64 = 1e-3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random architecture with `q <= 3` and parameters in `[-1, 1]`.
pub fn random_model(rng: &mut ChaCha8Rng) -> Model {
    let q = rng.random_range(1..=3usize);
    let init = InitStrategy::new(InitKind::UnaryTrainable);
    let mut cfg = if rng.random_bool(0.5) {
        CircuitConfig::parallel(q, init)
    } else {
        CircuitConfig::serial(q, rng.random_range(1..=3usize), init)
    };
    cfg.axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3usize)];
    cfg.observable_qubit = rng.random_range(0..q);
    let alpha = (0..cfg.encoding_gates)
        .map(|_| rng.random_range(0.3..3.0))
        .collect();
    let theta = (0..cfg.ansatz_blocks)
        .map(|_| {
            (0..cfg.block_params())
                .map(|_| rng.random_range(-1.0..1.0) / (q as f64))
                .collect()
        })
        .collect();
    assert!(matches!(cfg.layout, Layout::Parallel | Layout::Serial));
    Model::new(cfg, alpha, theta).unwrap()
}

/// One analytic partial against its central difference.
#[derive(Debug)]
pub struct PartialCheck {
    pub label: String,
    pub analytic: f64,
    pub numeric: f64,
}

impl PartialCheck {
    pub fn passes(&self) -> bool {
        let err = (self.analytic - self.numeric).abs();
        if self.analytic.abs() < FD_SMALL {
            err < FD_ABS
        } else {
            err / self.analytic.abs() < FD_REL
        }
    }
}

/// Every `d_alpha` and `d_theta` entry of `model` at `x` against central differences.
pub fn check_partials(model: &Model, x: f64) -> Vec<PartialCheck> {
    let (_, grad) = grad_forward(model, x).unwrap();
    let mut out = Vec::new();
    for j in 0..model.alpha().len() {
        let shifted = |d: f64| {
            let mut a = model.alpha().to_vec();
            a[j] += d;
            forward(&model.with_alpha(a).unwrap(), x).unwrap()
        };
        out.push(PartialCheck {
            label: format!("alpha[{j}]"),
            analytic: grad.d_alpha[j],
            numeric: (shifted(FD_STEP) - shifted(-FD_STEP)) / (2.0 * FD_STEP),
        });
    }
    for (b, block) in model.theta().iter().enumerate() {
        for m in 0..block.len() {
            let shifted = |d: f64| {
                let mut t = model.theta().to_vec();
                t[b][m] += d;
                forward(&model.with_theta(t).unwrap(), x).unwrap()
            };
            out.push(PartialCheck {
                label: format!("theta[{b}][{m}]"),
                analytic: grad.d_theta[b][m],
                numeric: (shifted(FD_STEP) - shifted(-FD_STEP)) / (2.0 * FD_STEP),
            });
        }
    }
    out
}

/// `exp(A)` by Taylor series with scaling and squaring.
pub fn taylor_expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let n = a.nrows();
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Every `Σ s_i α_i`, `s ∈ {-1, 0, 1}^L`, sorted and merged within `tol`.
pub fn brute_spectrum(alpha: &[f64], tol: f64) -> Vec<f64> {
    let l = alpha.len();
    let mut values = Vec::with_capacity(3usize.pow(l as u32));
    for code in 0..3usize.pow(l as u32) {
        let mut c = code;
        let mut w = 0.0;
        for a in alpha {
            w += (c % 3) as f64 * a - a;
            c /= 3;
        }
        values.push(w);
    }
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if out.last().is_none_or(|&u| v - u > tol) {
            out.push(v);
        }
    }
    out
}

/// Composite Simpson estimate of `(1/2) ∫_0^2 a(x) e^{-inπx} dx`, with `a`
/// written out piecewise here rather than taken from the library.
pub fn simpson_coefficient(n: i64, w: f64, panels: usize) -> C64 {
    let a = |x: f64| {
        let phase = if x <= 1.0 { w * x } else { w * (2.0 - x) };
        C64::from_polar(1.0, phase - n as f64 * std::f64::consts::PI * x)
    };
    // Integrate each half separately so the kink at x = 1 sits on a node.
    let half = |lo: f64| {
        let h = 1.0 / panels as f64;
        let mut s = a(lo) + a(lo + 1.0);
        for i in 1..panels {
            let x = lo + i as f64 * h;
            s += a(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * (h / 3.0)
    };
    (half(0.0) + half(1.0)) * 0.5
}
