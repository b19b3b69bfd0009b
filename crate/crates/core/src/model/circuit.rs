use serde::{Deserialize, Serialize};

use super::config::{CircuitConfig, Layout};
use crate::error::{Error, Result};
use crate::quantum::{hermitian_from_params, EigenExp, Pauli, Statevector, PAULI_ORDERING_TAG};

/// Trainable state of a VQC: prefactors `alpha` and one ansatz parameter
/// vector per block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDocument", into = "ModelDocument")]
pub struct Model {
    config: CircuitConfig,
    alpha: Vec<f64>,
    theta: Vec<Vec<f64>>,
}

/// On-disk form of a [`Model`]; the ordering tag pins the meaning of `theta`.
#[derive(Serialize, Deserialize)]
struct ModelDocument {
    pauli_ordering: String,
    config: CircuitConfig,
    alpha: Vec<f64>,
    theta: Vec<Vec<f64>>,
}

impl From<Model> for ModelDocument {
    fn from(m: Model) -> Self {
        ModelDocument {
            pauli_ordering: PAULI_ORDERING_TAG.to_string(),
            config: m.config,
            alpha: m.alpha,
            theta: m.theta,
        }
    }
}

impl TryFrom<ModelDocument> for Model {
    type Error = Error;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        if doc.pauli_ordering != PAULI_ORDERING_TAG {
            return Err(Error::Config(format!(
                "unsupported Pauli ordering tag {:?} (expected {PAULI_ORDERING_TAG:?})",
                doc.pauli_ordering
            )));
        }
        Model::new(doc.config, doc.alpha, doc.theta)
    }
}

impl Model {
    pub fn new(config: CircuitConfig, alpha: Vec<f64>, theta: Vec<Vec<f64>>) -> Result<Self> {
        config.validate()?;
        if alpha.len() != config.encoding_gates {
            return Err(Error::Dimension(format!(
                "{} prefactors for {} encoding gates",
                alpha.len(),
                config.encoding_gates
            )));
        }
        if theta.len() != config.ansatz_blocks {
            return Err(Error::Dimension(format!(
                "{} ansatz blocks given, config needs {}",
                theta.len(),
                config.ansatz_blocks
            )));
        }
        let per_block = config.block_params();
        if let Some(bad) = theta.iter().find(|t| t.len() != per_block) {
            return Err(Error::Dimension(format!(
                "ansatz block has {} parameters, expected {per_block}",
                bad.len()
            )));
        }
        Ok(Model {
            config,
            alpha,
            theta,
        })
    }

    pub fn config(&self) -> &CircuitConfig {
        &self.config
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn theta(&self) -> &[Vec<f64>] {
        &self.theta
    }

    pub fn with_alpha(&self, alpha: Vec<f64>) -> Result<Model> {
        Model::new(self.config.clone(), alpha, self.theta.clone())
    }

    pub fn with_theta(&self, theta: Vec<Vec<f64>>) -> Result<Model> {
        Model::new(self.config.clone(), self.alpha.clone(), theta)
    }

    /// Total number of scalar parameters (prefactors plus ansatz).
    pub fn parameter_count(&self) -> usize {
        self.alpha.len() + self.theta.iter().map(Vec::len).sum::<usize>()
    }

    /// Gate sequence in application order.
    pub fn ops(&self) -> Vec<Op> {
        let k = self.config.encoding_gates;
        match self.config.layout {
            Layout::Parallel => {
                let mut ops = vec![Op::Ansatz(0)];
                ops.extend((0..k).map(|j| Op::Encode {
                    qubit: j,
                    prefactor: j,
                }));
                ops.push(Op::Ansatz(1));
                ops
            }
            Layout::Serial => {
                let mut ops = vec![Op::Ansatz(0)];
                for j in 0..k {
                    ops.push(Op::Encode {
                        qubit: 0,
                        prefactor: j,
                    });
                    ops.push(Op::Ansatz(j + 1));
                }
                ops
            }
        }
    }

    /// Diagonalize every ansatz generator once so the circuit can be evaluated
    /// at many inputs.
    pub fn prepare(&self) -> Result<PreparedCircuit> {
        let blocks = self
            .theta
            .iter()
            .map(|t| {
                let h = hermitian_from_params(t, self.config.qubits)?;
                EigenExp::new(h.matrix())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PreparedCircuit {
            qubits: self.config.qubits,
            axis: self.config.axis,
            observable: self.config.observable_qubit,
            alpha: self.alpha.clone(),
            ops: self.ops(),
            blocks,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Ansatz(usize),
    Encode { qubit: usize, prefactor: usize },
}

/// A model with its ansatz unitaries precomputed.
#[derive(Clone, Debug)]
pub struct PreparedCircuit {
    pub(crate) qubits: usize,
    pub(crate) axis: Pauli,
    pub(crate) observable: usize,
    pub(crate) alpha: Vec<f64>,
    pub(crate) ops: Vec<Op>,
    pub(crate) blocks: Vec<EigenExp>,
}

impl PreparedCircuit {
    pub(crate) fn apply_op(&self, op: Op, state: &mut Statevector, x: f64) {
        match op {
            Op::Ansatz(b) => {
                crate::quantum::apply_full(&self.blocks[b].unitary, state);
            }
            Op::Encode { qubit, prefactor } => {
                let m = crate::quantum::rotation(self.alpha[prefactor] * x, self.axis);
                state.apply_single(qubit, &m);
            }
        }
    }

    /// Final state `U(x)|0...0>`.
    pub fn state(&self, x: f64) -> Statevector {
        let mut state = Statevector::zero(self.qubits).expect("validated qubit count");
        for &op in &self.ops {
            self.apply_op(op, &mut state, x);
        }
        state
    }

    /// Model output `<0|U^dagger Z_obs U|0>`.
    pub fn eval(&self, x: f64) -> f64 {
        self.state(x)
            .expectation_z(self.observable)
            .expect("validated observable qubit")
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Build a model with all ansatz parameters set to 1 and prefactors taken
/// from the initialization strategy. The seed is accepted for API stability
/// but no part of the default initialization is random.
pub fn build_model(config: CircuitConfig, _seed: u64) -> Result<Model> {
    config.validate()?;
    let alpha = config.init.prefactors(config.encoding_gates)?;
    let theta = vec![vec![1.0; config.block_params()]; config.ansatz_blocks];
    Model::new(config, alpha, theta)
}

/// Evaluate `f(x)` for a single input.
pub fn forward(model: &Model, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("input {x} is not finite")));
    }
    Ok(model.prepare()?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InitKind, InitStrategy};

    #[test]
    fn parallel_ternary_shapes() {
        let cfg = CircuitConfig::parallel(3, InitStrategy::new(InitKind::TernaryTrainable));
        let m = build_model(cfg, 0).unwrap();
        assert_eq!(m.alpha(), &[1.0, 3.0, 9.0]);
        assert_eq!(m.theta().len(), 2);
        assert!(m
            .theta()
            .iter()
            .all(|t| t.len() == 63 && t.iter().all(|&v| v == 1.0)));
    }

    #[test]
    fn perturbed_prefactors_kept() {
        let init = InitStrategy::with_prefactors(InitKind::UnaryTrainable, vec![1.01, 1.02, 1.03]);
        let m = build_model(CircuitConfig::parallel(3, init), 0).unwrap();
        assert_eq!(m.alpha(), &[1.01, 1.02, 1.03]);
    }

    #[test]
    fn four_qubit_blocks() {
        let cfg = CircuitConfig::parallel(4, InitStrategy::new(InitKind::TernaryTrainable));
        let m = build_model(cfg, 0).unwrap();
        assert!(m.theta().iter().all(|t| t.len() == 255));
        assert_eq!(m.parameter_count(), 4 + 510);
    }

    #[test]
    fn identity_ansatz_gives_cosine() {
        let cfg = CircuitConfig::parallel(1, InitStrategy::new(InitKind::UnaryTrainable));
        let m = Model::new(cfg, vec![1.0], vec![vec![0.0; 3]; 2]).unwrap();
        for x in [-2.0, 0.0, 0.4, 3.0] {
            assert!((forward(&m, x).unwrap() - f64::cos(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_prefactors_give_constant_output() {
        let cfg = CircuitConfig::parallel(2, InitStrategy::new(InitKind::UnaryTrainable));
        let theta = vec![(0..15).map(|i| 0.1 * i as f64).collect::<Vec<_>>(); 2];
        let m = Model::new(cfg, vec![0.0, 0.0], theta).unwrap();
        let c = m.prepare().unwrap();
        let f0 = c.eval(0.0);
        for x in [-3.0, -1.0, 2.5] {
            assert!((c.eval(x) - f0).abs() < 1e-13);
        }
    }

    #[test]
    fn serial_with_identity_blocks_adds_prefactors() {
        let init = InitStrategy::new(InitKind::UnaryTrainable);
        let cfg = CircuitConfig::serial(1, 3, init);
        let m = Model::new(cfg, vec![0.5, 1.2, 2.0], vec![vec![0.0; 3]; 4]).unwrap();
        for x in [-1.0, 0.3, 2.0] {
            assert!((forward(&m, x).unwrap() - f64::cos(3.7 * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let cfg = CircuitConfig::parallel(2, InitStrategy::new(InitKind::UnaryTrainable));
        assert!(Model::new(cfg.clone(), vec![1.0], vec![vec![0.0; 15]; 2]).is_err());
        assert!(Model::new(cfg.clone(), vec![1.0; 2], vec![vec![0.0; 14]; 2]).is_err());
        assert!(Model::new(cfg, vec![1.0; 2], vec![vec![0.0; 15]; 3]).is_err());
    }

    #[test]
    fn json_round_trip_carries_ordering_tag() {
        let cfg = CircuitConfig::parallel(2, InitStrategy::new(InitKind::TernaryFixed));
        let m = build_model(cfg, 3).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains(PAULI_ORDERING_TAG));
        let back: Model = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let tampered = text.replace(PAULI_ORDERING_TAG, "other");
        assert!(serde_json::from_str::<Model>(&tampered).is_err());
    }
}
