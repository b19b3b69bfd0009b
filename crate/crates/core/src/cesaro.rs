//! Fejér (Cesàro) approximation of a single encoding frequency by integer
//! frequencies, and the gate-count calculators built on it.
//!
//! Frequencies here live in the π-Fourier basis: the target `e^{iwx}` on
//! `x ∈ [0, 1]` is extended to the period-2 function
//! `a(x) = e^{iwx}` on `[0, 1]`, `e^{iw(2-x)}` on `(1, 2)`, which is
//! continuous, so its Fejér means converge uniformly. Term `n` of the series
//! is `c_n e^{inπx}`, i.e. frequency `nπ` in the `e^{iωx}` convention.
//!
//! The Cesàro order `M` is unrelated to the circuit observable.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{C64, I};

/// Below this distance from `|n|π` the closed form is replaced by quadrature.
pub const SINGULAR_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 1000;
const QUAD_PANELS: usize = 64;
const QUAD_TOLERANCE: f64 = 1e-14;

/// The period-2 extension of `e^{iwx}`.
pub fn aux_function(x: f64, w: f64) -> C64 {
    let t = x.rem_euclid(2.0);
    let phase = if t <= 1.0 { w * t } else { w * (2.0 - t) };
    C64::from_polar(1.0, phase)
}

/// Fourier coefficient `c_n = (1/2) ∫_0^2 a(x) e^{-inπx} dx`.
pub fn aux_coefficient(n: i64, w: f64) -> C64 {
    let npi = n as f64 * PI;
    if (w.abs() - npi.abs()).abs() < SINGULAR_TOLERANCE {
        return aux_coefficient_quadrature(n, w);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    -I * w * (sign * C64::from_polar(1.0, w) - 1.0) / (w * w - npi * npi)
}

/// Adaptive Gauss-Legendre evaluation of the defining integral.
pub fn aux_coefficient_quadrature(n: i64, w: f64) -> C64 {
    let npi = n as f64 * PI;
    let f = |x: f64| aux_function(x, w) * C64::from_polar(1.0, -npi * x);
    let h = 2.0 / QUAD_PANELS as f64;
    let total: C64 = (0..QUAD_PANELS)
        .map(|p| {
            let a = p as f64 * h;
            adaptive(&f, a, a + h, gauss10(&f, a, a + h), 0)
        })
        .sum();
    total * 0.5
}

const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_14,
];

fn gauss10(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut s = C64::new(0.0, 0.0);
    for (x, w) in GL10_NODES.iter().zip(GL10_WEIGHTS) {
        s += (f(mid - half * x) + f(mid + half * x)) * w;
    }
    s * half
}

fn adaptive(f: &impl Fn(f64) -> C64, a: f64, b: f64, whole: C64, depth: u32) -> C64 {
    let mid = 0.5 * (a + b);
    let left = gauss10(f, a, mid);
    let right = gauss10(f, mid, b);
    if depth >= 30 || (left + right - whole).norm() <= QUAD_TOLERANCE {
        return left + right;
    }
    adaptive(f, a, mid, left, depth + 1) + adaptive(f, mid, b, right, depth + 1)
}

/// Fejér mean `P_M(x) = Σ_{|n|≤M} (M+1-|n|)/(M+1) c_n e^{inπx}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CesaroApprox {
    pub order: usize,
    pub w: f64,
    /// Index `n + M` holds the weighted coefficient for `n`.
    pub weighted_coeffs: Vec<C64>,
}

impl CesaroApprox {
    pub fn weight(&self, n: i64) -> f64 {
        fejer_weight(self.order, n)
    }

    pub fn coefficient(&self, n: i64) -> C64 {
        let m = self.order as i64;
        if n.abs() > m {
            return C64::new(0.0, 0.0);
        }
        self.weighted_coeffs[(n + m) as usize]
    }

    pub fn eval(&self, x: f64) -> C64 {
        let m = self.order as i64;
        // e^{inπx} by repeated multiplication from e^{-iMπx}.
        let step = C64::from_polar(1.0, PI * x);
        let mut basis = C64::from_polar(1.0, -(m as f64) * PI * x);
        let mut sum = C64::new(0.0, 0.0);
        for (j, c) in self.weighted_coeffs.iter().enumerate() {
            if j % 64 == 0 {
                basis = C64::from_polar(1.0, (j as i64 - m) as f64 * PI * x);
            }
            sum += c * basis;
            basis *= step;
        }
        sum
    }
}

/// `(M + 1 - |n|) / (M + 1)`, zero outside `|n| ≤ M`.
pub fn fejer_weight(order: usize, n: i64) -> f64 {
    let m = order as f64;
    let a = n.unsigned_abs() as f64;
    if a > m {
        0.0
    } else {
        (m + 1.0 - a) / (m + 1.0)
    }
}

pub fn cesaro_mean(order: usize, w: f64) -> CesaroApprox {
    let m = order as i64;
    let weighted_coeffs = (-m..=m)
        .map(|n| aux_coefficient(n, w) * fejer_weight(order, n))
        .collect();
    CesaroApprox {
        order,
        w,
        weighted_coeffs,
    }
}

fn grid_max(grid: usize, f: impl Fn(f64) -> f64 + Sync) -> Result<f64> {
    if grid < MIN_GRID {
        return Err(Error::Config(format!(
            "grid of {grid} points is below {MIN_GRID}"
        )));
    }
    let last = (grid - 1) as f64;
    Ok((0..grid)
        .into_par_iter()
        .map(|i| f(i as f64 / last))
        .reduce(|| 0.0, f64::max))
}

/// `max |P_M(x) - e^{iwx}|` over `grid` uniform points of `[0, 1]`; a lower
/// bound on the true supremum.
pub fn sup_error(approx: &CesaroApprox, grid: usize) -> Result<f64> {
    grid_max(grid, |x| {
        (approx.eval(x) - C64::from_polar(1.0, approx.w * x)).norm()
    })
}

/// `max |P_M(x)|` over the same grid; at most 1 up to rounding.
pub fn sup_modulus(approx: &CesaroApprox, grid: usize) -> Result<f64> {
    grid_max(grid, |x| approx.eval(x).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusGap {
    pub exact: f64,
    pub bound: f64,
}

impl FrobeniusGap {
    /// The bound is only claimed when the scalar error is at most 1.
    pub fn holds(&self) -> bool {
        self.exact <= self.bound + 1e-12
    }
}

/// Frobenius distance between the completed single-qubit unitary with
/// diagonal `P_M(x)` and `diag(e^{iwx}, e^{-iwx})`, and its square-root bound.
pub fn frobenius_gap(approx: &CesaroApprox, x: f64) -> Result<FrobeniusGap> {
    frobenius_gap_from(approx.eval(x), C64::from_polar(1.0, approx.w * x))
}

/// Same as [`frobenius_gap`] for an explicit value `p` of `P_M(x)`.
pub fn frobenius_gap_from(p: C64, target: C64) -> Result<FrobeniusGap> {
    let modulus = p.norm();
    if modulus > 1.0 + 1e-9 {
        return Err(Error::Invariant(format!(
            "|P_M(x)| = {modulus} exceeds 1; the off-diagonal completion does not exist"
        )));
    }
    let d = (p - target).norm();
    let q_sqr = (1.0 - modulus * modulus).max(0.0);
    Ok(FrobeniusGap {
        exact: 2f64.sqrt() * (d * d + q_sqr).sqrt(),
        bound: (6.0 * d).sqrt(),
    })
}

/// Largest `k` considered; `(3^k - 1)/2` still fits a `u128`.
const MAX_TERNARY_K: u32 = 80;

/// Smallest `k ≥ 1` with `(3^k - 1)/2 ≥ w_max`.
pub fn required_k_ternary(w_max: f64) -> Result<u32> {
    if !(w_max > 0.0 && w_max.is_finite()) {
        return Err(Error::Domain(format!(
            "w_max = {w_max} must be positive and finite"
        )));
    }
    let mut power: u128 = 3;
    for k in 1..=MAX_TERNARY_K {
        if ternary_reach(power) >= w_max {
            return Ok(k);
        }
        power *= 3;
    }
    Err(Error::Domain(format!(
        "w_max = {w_max} needs more than {MAX_TERNARY_K} gates"
    )))
}

/// `(3^k - 1)/2` for `power = 3^k`. Exact whenever the result is below 2^53.
pub fn ternary_reach(power: u128) -> f64 {
    ((power - 1) / 2) as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    UnaryFixed,
    TernaryFixed,
    TernaryTrainable,
}

/// Encoding-gate scaling for one architecture, with every hidden constant
/// set to 1. An order-of-magnitude indicator, not a gate count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub architecture: Architecture,
    pub w: f64,
    pub epsilon: f64,
    pub k_required: u64,
    pub ansatz_params: u64,
    pub k_opt_note: String,
}

/// `ceil` that ignores rounding noise just above an integer.
fn ceil_clean(v: f64) -> u64 {
    (v - 1e-9).ceil().max(1.0) as u64
}

pub fn gate_count_table(w_max: f64, epsilon: f64) -> Result<Vec<ScalingReport>> {
    let k_trainable = required_k_ternary(w_max)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon = {epsilon} not in (0, 1)")));
    }
    let ansatz_params = 2 * w_max.ceil() as u64 + 1;
    let rows = [
        (
            Architecture::UnaryFixed,
            ceil_clean(w_max + epsilon.powi(-2)),
            "O(w_max + eps^-2) per trainable gate replaced; baseline k_opt not computed",
        ),
        (
            Architecture::TernaryFixed,
            ceil_clean(w_max.log(3.0) + (1.0 / epsilon).log(3.0)),
            "O(log3 w_max + log3 1/eps) per trainable gate replaced; baseline k_opt not computed",
        ),
        (
            Architecture::TernaryTrainable,
            u64::from(k_trainable),
            "exact: smallest k with (3^k - 1)/2 >= w_max; independent of eps",
        ),
    ];
    Ok(rows
        .into_iter()
        .map(|(architecture, k_required, note)| ScalingReport {
            architecture,
            w: w_max,
            epsilon,
            k_required,
            ansatz_params,
            k_opt_note: note.to_string(),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub w: f64,
    pub order: usize,
    pub sup_error: f64,
    /// `sup_error (M + 1) / ln(M + 1)`; flat under the `O(log M / M)` law.
    pub scaled_error: f64,
    pub sup_modulus: f64,
    pub frobenius_bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CesaroReport {
    pub grid: usize,
    pub convergence: Vec<ConvergenceRow>,
    pub scaling: Vec<ScalingReport>,
}

/// Convergence rows for every `(w, M)` pair plus the scaling table.
pub fn cesaro_report(
    frequencies: &[f64],
    orders: &[usize],
    w_max: f64,
    epsilon: f64,
    grid: usize,
) -> Result<CesaroReport> {
    let mut convergence = Vec::with_capacity(frequencies.len() * orders.len());
    for &w in frequencies {
        for &order in orders {
            let approx = cesaro_mean(order, w);
            let err = sup_error(&approx, grid)?;
            let last = (grid - 1) as f64;
            let mut holds = true;
            for i in 0..grid {
                holds &= frobenius_gap(&approx, i as f64 / last)?.holds();
            }
            let m1 = order as f64 + 1.0;
            convergence.push(ConvergenceRow {
                w,
                order,
                sup_error: err,
                scaled_error: if order == 0 {
                    f64::NAN
                } else {
                    err * m1 / m1.ln()
                },
                sup_modulus: sup_modulus(&approx, grid)?,
                frobenius_bound_holds: holds,
            });
        }
    }
    Ok(CesaroReport {
        grid,
        convergence,
        scaling: gate_count_table(w_max, epsilon)?,
    })
}
