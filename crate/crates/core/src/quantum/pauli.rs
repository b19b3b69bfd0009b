use serde::{Deserialize, Serialize};

use super::{CMatrix, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

/// Version tag written next to every serialized parameter vector. Bump it if
/// [`generator_basis`] ever changes order.
pub const PAULI_ORDERING_TAG: &str = "pauli-lex-IXYZ-q0-major-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [[C64; 2]; 2] {
        match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        }
    }

    pub fn parse(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis, stored in a sparse form.
///
/// Every Pauli word has exactly one nonzero per row: row `r` has its entry in
/// column `r ^ flip_mask`, with value `(-i)^y_count * (-1)^popcount(r & sign_mask)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliWord {
    labels: Vec<Pauli>,
    flip_mask: usize,
    sign_mask: usize,
    y_count: u32,
}

impl PauliWord {
    pub fn new(labels: Vec<Pauli>) -> Self {
        let q = labels.len();
        let mut flip_mask = 0;
        let mut sign_mask = 0;
        let mut y_count = 0;
        for (j, p) in labels.iter().enumerate() {
            let bit = 1usize << (q - 1 - j);
            match p {
                Pauli::I => {}
                Pauli::X => flip_mask |= bit,
                Pauli::Y => {
                    flip_mask |= bit;
                    sign_mask |= bit;
                    y_count += 1;
                }
                Pauli::Z => sign_mask |= bit,
            }
        }
        PauliWord {
            labels,
            flip_mask,
            sign_mask,
            y_count,
        }
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    pub fn qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&p| p == Pauli::I)
    }

    /// Column of the single nonzero entry in `row`.
    #[inline]
    pub fn column(&self, row: usize) -> usize {
        row ^ self.flip_mask
    }

    /// Value of the single nonzero entry in `row`.
    #[inline]
    pub fn entry(&self, row: usize) -> C64 {
        let base = match self.y_count % 4 {
            0 => ONE,
            1 => -I,
            2 => -ONE,
            _ => I,
        };
        if (row & self.sign_mask).count_ones() % 2 == 1 {
            -base
        } else {
            base
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = 1usize << self.qubits();
        let mut m = CMatrix::zeros(n, n);
        for r in 0..n {
            m[(r, self.column(r))] = self.entry(r);
        }
        m
    }

    /// `Tr(self * k)`, using the one-nonzero-per-row structure.
    pub fn trace_product(&self, k: &CMatrix) -> C64 {
        let n = 1usize << self.qubits();
        let mut acc = ZERO;
        for r in 0..n {
            acc += self.entry(r) * k[(self.column(r), r)];
        }
        acc
    }
}

impl std::fmt::Display for PauliWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in &self.labels {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

/// Dense matrix of a Pauli word. The all-identity word is rejected because it
/// is not part of the special-unitary generator basis.
pub fn pauli_word(labels: &[Pauli]) -> Result<CMatrix> {
    if labels.is_empty() {
        return Err(Error::Dimension("empty Pauli word".into()));
    }
    let word = PauliWord::new(labels.to_vec());
    if word.is_identity() {
        return Err(Error::Config(
            "the all-identity word is excluded from the generator basis".into(),
        ));
    }
    Ok(word.to_matrix())
}

/// The `4^q - 1` non-identity Pauli words on `q` qubits, in lexicographic
/// order over `(I, X, Y, Z)` with qubit 0 as the leading character.
///
/// For `q = 2` this is `IX, IY, IZ, XI, XX, ..., ZZ`.
pub fn generator_basis(q: usize) -> Vec<PauliWord> {
    let count = 1usize << (2 * q);
    (1..count)
        .map(|code| {
            let labels = (0..q)
                .map(|j| Pauli::ALL[(code >> (2 * (q - 1 - j))) & 3])
                .collect();
            PauliWord::new(labels)
        })
        .collect()
}
