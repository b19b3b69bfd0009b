use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Pauli, MAX_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// All encoding gates act on qubit 0, separated by full-width ansatz blocks.
    Serial,
    /// One encoding gate per qubit in a single layer between two ansatz blocks.
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    UnaryFixed,
    TernaryFixed,
    UnaryTrainable,
    TernaryTrainable,
}

impl InitKind {
    pub const ALL: [InitKind; 4] = [
        InitKind::UnaryFixed,
        InitKind::TernaryFixed,
        InitKind::UnaryTrainable,
        InitKind::TernaryTrainable,
    ];

    pub fn trainable(self) -> bool {
        matches!(self, InitKind::UnaryTrainable | InitKind::TernaryTrainable)
    }

    pub fn label(self) -> &'static str {
        match self {
            InitKind::UnaryFixed => "unary_fixed",
            InitKind::TernaryFixed => "ternary_fixed",
            InitKind::UnaryTrainable => "unary_trainable",
            InitKind::TernaryTrainable => "ternary_trainable",
        }
    }

    /// Unary kinds start at all ones, ternary kinds at `1, 3, 9, ..., 3^{k-1}`.
    pub fn default_prefactors(self, k: usize) -> Vec<f64> {
        match self {
            InitKind::UnaryFixed | InitKind::UnaryTrainable => vec![1.0; k],
            InitKind::TernaryFixed | InitKind::TernaryTrainable => {
                (0..k).map(|j| 3f64.powi(j as i32)).collect()
            }
        }
    }
}

/// How prefactors are initialized and whether they are trained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitStrategy {
    pub kind: InitKind,
    /// Overrides the kind's default starting prefactors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_prefactors: Option<Vec<f64>>,
}

impl InitStrategy {
    pub fn new(kind: InitKind) -> Self {
        InitStrategy {
            kind,
            initial_prefactors: None,
        }
    }

    pub fn with_prefactors(kind: InitKind, prefactors: Vec<f64>) -> Self {
        InitStrategy {
            kind,
            initial_prefactors: Some(prefactors),
        }
    }

    pub fn trainable(&self) -> bool {
        self.kind.trainable()
    }

    pub fn prefactors(&self, k: usize) -> Result<Vec<f64>> {
        match &self.initial_prefactors {
            Some(p) if p.len() != k => Err(Error::Config(format!(
                "{} initial prefactors given for {k} encoding gates",
                p.len()
            ))),
            Some(p) if p.iter().any(|v| !v.is_finite()) => {
                Err(Error::Config("non-finite initial prefactor".into()))
            }
            Some(p) => Ok(p.clone()),
            None => Ok(self.kind.default_prefactors(k)),
        }
    }
}

/// Architecture of a single-feature VQC.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitConfig {
    pub qubits: usize,
    pub encoding_gates: usize,
    pub layout: Layout,
    pub axis: Pauli,
    pub observable_qubit: usize,
    pub init: InitStrategy,
    pub ansatz_blocks: usize,
}

impl CircuitConfig {
    /// `W1 . (R(a_0 x) (x) ... (x) R(a_{q-1} x)) . W0`, measured on the last qubit
    /// with X-axis encodings.
    pub fn parallel(qubits: usize, init: InitStrategy) -> Self {
        CircuitConfig {
            qubits,
            encoding_gates: qubits,
            layout: Layout::Parallel,
            axis: Pauli::X,
            observable_qubit: qubits.saturating_sub(1),
            init,
            ansatz_blocks: 2,
        }
    }

    /// `W_k S_k ... W_1 S_1 W_0`, all encodings on qubit 0.
    pub fn serial(qubits: usize, encoding_gates: usize, init: InitStrategy) -> Self {
        CircuitConfig {
            qubits,
            encoding_gates,
            layout: Layout::Serial,
            axis: Pauli::X,
            observable_qubit: qubits.saturating_sub(1),
            init,
            ansatz_blocks: encoding_gates + 1,
        }
    }

    /// Number of ansatz parameters per block, `4^q - 1`.
    pub fn block_params(&self) -> usize {
        (1usize << (2 * self.qubits)) - 1
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits < 1 || self.qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "qubit count {} outside 1..={MAX_QUBITS}",
                self.qubits
            )));
        }
        if self.encoding_gates < 1 {
            return Err(Error::Config(
                "at least one encoding gate is required".into(),
            ));
        }
        match self.layout {
            Layout::Parallel => {
                if self.encoding_gates != self.qubits {
                    return Err(Error::Config(format!(
                        "parallel layout needs one encoding gate per qubit ({} gates, {} qubits)",
                        self.encoding_gates, self.qubits
                    )));
                }
                if self.ansatz_blocks != 2 {
                    return Err(Error::Config(
                        "parallel layout uses exactly two ansatz blocks".into(),
                    ));
                }
            }
            Layout::Serial => {
                if self.ansatz_blocks != self.encoding_gates + 1 {
                    return Err(Error::Config(format!(
                        "serial layout with {} encodings needs {} ansatz blocks, got {}",
                        self.encoding_gates,
                        self.encoding_gates + 1,
                        self.ansatz_blocks
                    )));
                }
            }
        }
        if self.axis == Pauli::I {
            return Err(Error::Config("encoding axis must be X, Y or Z".into()));
        }
        if self.observable_qubit >= self.qubits {
            return Err(Error::Config(format!(
                "observable qubit {} out of range",
                self.observable_qubit
            )));
        }
        self.init.prefactors(self.encoding_gates)?;
        Ok(())
    }
}
