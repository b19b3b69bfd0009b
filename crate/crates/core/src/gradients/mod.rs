//! Exact gradients of the model output and of the mean-squared-error loss.
//!
//! One forward sweep caches the state before every gate; one backward sweep
//! carries the adjoint state `lambda = U_{>j}^dagger Z U_{>j} psi` back through
//! the circuit. For a gate `G` with input `psi_in`, the output changes by
//! `2 Re <lambda| dG |psi_in>`.
//!
//! * Encoding rotations: `dR/dalpha = (-i x sigma / 2) R`, giving
//!   `x Im <lambda| sigma |psi_out>`.
//! * Ansatz blocks `U = exp(iH(theta))`: the outer products `psi_in lambda^dagger`
//!   are summed over samples into one matrix `G` per block, and each Pauli
//!   coefficient derivative `2 Re Tr(dU_m G)` is read off using the
//!   Daleckii-Krein form of `dU` in the eigenbasis of `H`.

mod sweep;

pub use sweep::{gradient_sweep, gradient_sweep_on, GradientSweep, SweepRow};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Model, Op, PreparedCircuit};
use crate::quantum::{generator_basis, rotation, CMatrix, Pauli, Statevector, ZERO};

/// Partial derivatives with the same shape as a [`Model`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientBundle {
    pub d_alpha: Vec<f64>,
    pub d_theta: Vec<Vec<f64>>,
}

impl GradientBundle {
    pub fn zeros_like(model: &Model) -> Self {
        GradientBundle {
            d_alpha: vec![0.0; model.alpha().len()],
            d_theta: model.theta().iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.d_alpha
            .iter()
            .chain(self.d_theta.iter().flatten())
            .all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.d_alpha
            .iter()
            .chain(self.d_theta.iter().flatten())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Per-block sums of `psi_in lambda^dagger` plus the prefactor partials.
struct Accumulator {
    d_alpha: Vec<f64>,
    block_outer: Vec<CMatrix>,
}

impl Accumulator {
    fn new(circuit: &PreparedCircuit) -> Self {
        let n = 1usize << circuit.qubits;
        Accumulator {
            d_alpha: vec![0.0; circuit.alpha.len()],
            block_outer: vec![CMatrix::zeros(n, n); circuit.blocks.len()],
        }
    }

    fn finish(self, circuit: &PreparedCircuit) -> GradientBundle {
        let basis = generator_basis(circuit.qubits);
        let d_theta = circuit
            .blocks
            .iter()
            .zip(&self.block_outer)
            .map(|(eig, g)| {
                // Tr(dU_m G) = i Tr(P_m K) with K = V C^T V^dagger,
                // C_ab = Gamma_ab (V^dagger G V)_ba.
                let gamma = eig.divided_differences();
                let b = eig.vectors.adjoint() * g * &eig.vectors;
                let ct = gamma.transpose().component_mul(&b);
                let k = &eig.vectors * ct * eig.vectors.adjoint();
                basis
                    .iter()
                    .map(|word| -2.0 * word.trace_product(&k).im)
                    .collect()
            })
            .collect();
        GradientBundle {
            d_alpha: self.d_alpha,
            d_theta,
        }
    }
}

fn pauli_apply(state: &mut Statevector, qubit: usize, axis: Pauli) {
    state.apply_single(qubit, &axis.matrix());
}

/// Run one sample forward, then (unless the weight is zero) backward, adding
/// `weight * df/dparam` into `acc`. Returns `f(x)`.
fn sample_pass(
    circuit: &PreparedCircuit,
    x: f64,
    weight_of: impl FnOnce(f64) -> f64,
    acc: &mut Accumulator,
) -> f64 {
    let mut states = Vec::with_capacity(circuit.ops.len() + 1);
    let mut state = Statevector::zero(circuit.qubits).expect("validated qubit count");
    states.push(state.clone());
    for &op in &circuit.ops {
        circuit.apply_op(op, &mut state, x);
        states.push(state.clone());
    }
    let value = state
        .expectation_z(circuit.observable)
        .expect("validated observable");
    let weight = weight_of(value);
    if weight == 0.0 {
        return value;
    }

    let mut lambda = state;
    lambda.apply_z(circuit.observable);
    lambda
        .amplitudes_mut()
        .iter_mut()
        .for_each(|a| *a *= weight);

    for (j, &op) in circuit.ops.iter().enumerate().rev() {
        match op {
            Op::Ansatz(b) => {
                let psi_in = states[j].amplitudes();
                let g = &mut acc.block_outer[b];
                let lam = lambda.amplitudes();
                for (c, l) in lam.iter().enumerate() {
                    let lc = l.conj();
                    if lc == ZERO {
                        continue;
                    }
                    let mut col = g.column_mut(c);
                    for (r, p) in psi_in.iter().enumerate() {
                        col[r] += p * lc;
                    }
                }
                let u_dag = circuit.blocks[b].unitary.adjoint();
                crate::quantum::apply_full(&u_dag, &mut lambda);
            }
            Op::Encode { qubit, prefactor } => {
                let mut sigma_psi = states[j + 1].clone();
                pauli_apply(&mut sigma_psi, qubit, circuit.axis);
                let overlap = lambda.inner(&sigma_psi);
                acc.d_alpha[prefactor] += x * overlap.im;
                let inverse = rotation(-circuit.alpha[prefactor] * x, circuit.axis);
                lambda.apply_single(qubit, &inverse);
            }
        }
    }
    value
}

/// `f(x)` and all partial derivatives `df/dalpha`, `df/dtheta`.
pub fn grad_forward(model: &Model, x: f64) -> Result<(f64, GradientBundle)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("input {x} is not finite")));
    }
    let circuit = model.prepare()?;
    let mut acc = Accumulator::new(&circuit);
    let value = sample_pass(&circuit, x, |_| 1.0, &mut acc);
    let grad = acc.finish(&circuit);
    check_finite(value, &grad)?;
    Ok((value, grad))
}

/// Mean squared error over `(xs, ys)` and its exact full-batch gradient.
pub fn loss_and_grad(model: &Model, xs: &[f64], ys: &[f64]) -> Result<(f64, GradientBundle)> {
    let circuit = model.prepare()?;
    loss_and_grad_prepared(&circuit, xs, ys)
}

pub(crate) fn loss_and_grad_prepared(
    circuit: &PreparedCircuit,
    xs: &[f64],
    ys: &[f64],
) -> Result<(f64, GradientBundle)> {
    if xs.is_empty() {
        return Err(Error::Config("empty dataset".into()));
    }
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "{} inputs but {} targets",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mut acc = Accumulator::new(circuit);
    let mut sse = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sample_pass(
            circuit,
            x,
            |f| {
                let r = f - y;
                sse += r * r;
                2.0 * r / n
            },
            &mut acc,
        );
    }
    let loss = sse / n;
    let grad = acc.finish(circuit);
    check_finite(loss, &grad)?;
    Ok((loss, grad))
}

/// Mean squared error without gradients.
pub fn mse(circuit: &PreparedCircuit, xs: &[f64], ys: &[f64]) -> f64 {
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = circuit.eval(x) - y;
            r * r
        })
        .sum();
    sse / xs.len() as f64
}

fn check_finite(value: f64, grad: &GradientBundle) -> Result<()> {
    if !value.is_finite() || !grad.is_finite() {
        return Err(Error::Numeric("non-finite value or gradient".into()));
    }
    Ok(())
}
