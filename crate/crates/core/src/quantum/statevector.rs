use super::{UnitaryGate, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Hard cap on register size; `2^12` amplitudes is far beyond what the
/// single-feature experiments need.
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    amplitudes: Vec<C64>,
    qubits: usize,
}

impl Statevector {
    /// The all-zeros basis state on `q` qubits.
    pub fn zero(q: usize) -> Result<Self> {
        check_qubits(q)?;
        let mut amplitudes = vec![ZERO; 1 << q];
        amplitudes[0] = ONE;
        Ok(Statevector {
            amplitudes,
            qubits: q,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let n = amplitudes.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "statevector length {n} is not 2^q with q >= 1"
            )));
        }
        let q = n.trailing_zeros() as usize;
        check_qubits(q)?;
        Ok(Statevector {
            amplitudes,
            qubits: q,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    fn bit(&self, qubit: usize) -> usize {
        1 << (self.qubits - 1 - qubit)
    }

    /// Apply `gate` in place at its target qubits.
    pub fn apply(&mut self, gate: &UnitaryGate) -> Result<()> {
        let targets = gate.targets();
        if let Some(&bad) = targets.iter().find(|&&t| t >= self.qubits) {
            return Err(Error::Dimension(format!(
                "gate target {bad} out of range for {} qubits",
                self.qubits
            )));
        }
        let full = targets.len() == self.qubits && targets.iter().enumerate().all(|(i, &t)| i == t);
        if full {
            self.amplitudes = matvec(gate.matrix(), &self.amplitudes);
            return Ok(());
        }

        let masks: Vec<usize> = targets.iter().map(|&t| self.bit(t)).collect();
        let target_mask: usize = masks.iter().sum();
        let local = 1usize << targets.len();
        let m = gate.matrix();
        let mut indices = vec![0usize; local];
        let mut buf = vec![ZERO; local];
        for base in 0..self.amplitudes.len() {
            if base & target_mask != 0 {
                continue;
            }
            // Local index bit (arity-1-i) corresponds to targets[i].
            for (l, slot) in indices.iter_mut().enumerate() {
                let mut idx = base;
                for (i, &mask) in masks.iter().enumerate() {
                    if l >> (masks.len() - 1 - i) & 1 == 1 {
                        idx |= mask;
                    }
                }
                *slot = idx;
            }
            for (r, out) in buf.iter_mut().enumerate() {
                *out = indices
                    .iter()
                    .enumerate()
                    .map(|(c, &idx)| m[(r, c)] * self.amplitudes[idx])
                    .sum();
            }
            for (l, &idx) in indices.iter().enumerate() {
                self.amplitudes[idx] = buf[l];
            }
        }
        Ok(())
    }

    /// Apply a 2x2 matrix to one qubit without building a [`UnitaryGate`].
    pub(crate) fn apply_single(&mut self, qubit: usize, m: &[[C64; 2]; 2]) {
        let bit = self.bit(qubit);
        for i0 in 0..self.amplitudes.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
            self.amplitudes[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// `<psi| Z_qubit |psi>`.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.qubits {
            return Err(Error::Dimension(format!(
                "observable qubit {qubit} out of range for {} qubits",
                self.qubits
            )));
        }
        let bit = self.bit(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i & bit == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum())
    }

    /// Multiply every amplitude whose `qubit` bit is set by -1 (Z in place).
    pub(crate) fn apply_z(&mut self, qubit: usize) {
        let bit = self.bit(qubit);
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn check_qubits(q: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&q) {
        return Err(Error::Config(format!(
            "qubit count {q} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

pub(crate) fn matvec(m: &super::CMatrix, v: &[C64]) -> Vec<C64> {
    let n = v.len();
    let mut out = vec![ZERO; n];
    // Column-major storage: accumulate column by column.
    for (c, &vc) in v.iter().enumerate() {
        if vc == ZERO {
            continue;
        }
        let col = m.column(c);
        for (o, &mrc) in out.iter_mut().zip(col.iter()) {
            *o += mrc * vc;
        }
    }
    out
}
