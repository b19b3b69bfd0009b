use super::{generator_basis, unitarity_defect, CMatrix, Pauli, C64, I, ZERO};
use crate::error::{Error, Result};

/// A unitary matrix together with the qubits it acts on. Local index bit
/// `arity - 1 - i` of the matrix corresponds to `targets[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: CMatrix,
    targets: Vec<usize>,
}

impl UnitaryGate {
    pub fn new(matrix: CMatrix, targets: Vec<usize>) -> Result<Self> {
        let dim = 1usize << targets.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension(format!(
                "{}x{} matrix cannot act on {} qubits",
                matrix.nrows(),
                matrix.ncols(),
                targets.len()
            )));
        }
        let mut sorted = targets.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != targets.len() {
            return Err(Error::Dimension("repeated gate target".into()));
        }
        Ok(UnitaryGate { matrix, targets })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    /// Same matrix, acting on different qubits.
    pub fn on(self, targets: Vec<usize>) -> Result<Self> {
        UnitaryGate::new(self.matrix, targets)
    }
}

/// `H = sum_m coeffs[m] * P_m` over the non-identity Pauli basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianGenerator {
    matrix: CMatrix,
    basis_coeffs: Vec<f64>,
    qubits: usize,
}

impl HermitianGenerator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn basis_coeffs(&self) -> &[f64] {
        &self.basis_coeffs
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }
}

/// Build the special-unitary generator for one ansatz block.
pub fn hermitian_from_params(theta: &[f64], q: usize) -> Result<HermitianGenerator> {
    if q == 0 || q > super::MAX_QUBITS {
        return Err(Error::Config(format!("unsupported qubit count {q}")));
    }
    let expected = (1usize << (2 * q)) - 1;
    if theta.len() != expected {
        return Err(Error::Dimension(format!(
            "{q}-qubit generator needs {expected} coefficients, got {}",
            theta.len()
        )));
    }
    let n = 1usize << q;
    let mut matrix = CMatrix::zeros(n, n);
    for (word, &t) in generator_basis(q).iter().zip(theta) {
        if t == 0.0 {
            continue;
        }
        for r in 0..n {
            matrix[(r, word.column(r))] += word.entry(r) * t;
        }
    }
    Ok(HermitianGenerator {
        matrix,
        basis_coeffs: theta.to_vec(),
        qubits: q,
    })
}

/// Spectral form of `exp(iH)`: `H = V diag(values) V^dagger`,
/// `unitary = V diag(e^{i values}) V^dagger`.
#[derive(Clone, Debug)]
pub struct EigenExp {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub unitary: CMatrix,
}

impl EigenExp {
    pub fn new(h: &CMatrix) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n {
            return Err(Error::Dimension("generator is not square".into()));
        }
        if h.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numeric("non-finite generator entry".into()));
        }
        let eig = h
            .clone()
            .try_symmetric_eigen(1e-15, 10_000)
            .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let vectors = eig.eigenvectors;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite eigenvalue".into()));
        }
        let mut scaled = vectors.clone();
        for (c, &lam) in values.iter().enumerate() {
            let phase = C64::from_polar(1.0, lam);
            scaled.column_mut(c).iter_mut().for_each(|v| *v *= phase);
        }
        let unitary = scaled * vectors.adjoint();
        Ok(EigenExp {
            values,
            vectors,
            unitary,
        })
    }

    /// Divided differences of `e^{i lambda}` scaled by `1/i`, the kernel of the
    /// Daleckii-Krein derivative formula. Uses the exact identity
    /// `(e^{ia} - e^{ib}) / (i(a - b)) = e^{i(a+b)/2} sinc((a-b)/2)`, which stays
    /// accurate for nearly equal eigenvalues.
    pub fn divided_differences(&self) -> CMatrix {
        let n = self.values.len();
        CMatrix::from_fn(n, n, |a, b| {
            let (la, lb) = (self.values[a], self.values[b]);
            let d = la - lb;
            if d.abs() < 1e-12 {
                C64::from_polar(1.0, la)
            } else {
                let half = 0.5 * d;
                C64::from_polar(half.sin() / half, 0.5 * (la + lb))
            }
        })
    }

    /// Directional derivative of `exp(iH)` along `dh`:
    /// `V (Gamma o (V^dagger i dH V)) V^dagger`.
    pub fn derivative(&self, dh: &CMatrix) -> CMatrix {
        let gamma = self.divided_differences();
        let inner = self.vectors.adjoint() * dh * &self.vectors * I;
        let weighted = inner.component_mul(&gamma);
        &self.vectors * weighted * self.vectors.adjoint()
    }
}

/// `exp(iH)` for a Hermitian generator acting on all of its qubits.
pub fn unitary_exp(h: &HermitianGenerator) -> Result<UnitaryGate> {
    let e = EigenExp::new(h.matrix())?;
    let defect = unitarity_defect(&e.unitary);
    if defect > 1e-10 {
        return Err(Error::Numeric(format!(
            "matrix exponential lost unitarity (defect {defect:e})"
        )));
    }
    UnitaryGate::new(e.unitary, (0..h.qubits()).collect())
}

/// Rotation `exp(-i (alpha x / 2) sigma) = cos(alpha x/2) I - i sin(alpha x/2) sigma`.
pub(crate) fn rotation_matrix(angle: f64, axis: Pauli) -> [[C64; 2]; 2] {
    let half = 0.5 * angle;
    let (s, c) = half.sin_cos();
    let sigma = axis.matrix();
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            let id = if r == col { c } else { 0.0 };
            out[r][col] = C64::new(id, 0.0) - I * s * sigma[r][col];
        }
    }
    out
}

/// Single-qubit encoding rotation on qubit 0; use [`UnitaryGate::on`] to move it.
pub fn encoding_gate(alpha: f64, x: f64, axis: Pauli) -> Result<UnitaryGate> {
    if axis == Pauli::I {
        return Err(Error::Config("encoding axis must be X, Y or Z".into()));
    }
    let m = rotation_matrix(alpha * x, axis);
    UnitaryGate::new(
        CMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]]),
        vec![0],
    )
}
