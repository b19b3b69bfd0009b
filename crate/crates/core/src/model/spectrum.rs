use serde::{Deserialize, Serialize};

/// Frequencies closer than this are treated as one.
pub const DEFAULT_DEDUP_TOLERANCE: f64 = 1e-9;

/// Sorted, symmetric set of frequencies reachable by a set of encoding gates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySpectrum {
    pub values: Vec<f64>,
    pub dedup_tolerance: f64,
}

impl FrequencySpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonnegative half of the spectrum, starting with 0.
    pub fn nonnegative(&self) -> &[f64] {
        let zero = self.values.len() / 2;
        &self.values[zero..]
    }

    pub fn max_frequency(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// `{ sum_i s_i alpha_i : s_i in {-1, 0, 1} }`, deduplicated and sorted.
///
/// Each Pauli rotation has generator eigenvalues `+-alpha/2`, so one gate
/// contributes differences `{-alpha, 0, alpha}`. The set is built one gate at
/// a time on magnitudes only and then mirrored, which makes the result exactly
/// symmetric and always contain 0.
pub fn spectrum_of(alpha: &[f64], tol: f64) -> FrequencySpectrum {
    let mut signed = vec![0.0f64];
    for &a in alpha {
        let mut next = Vec::with_capacity(signed.len() * 3);
        for &w in &signed {
            next.extend_from_slice(&[w - a, w, w + a]);
        }
        next.sort_by(f64::total_cmp);
        signed = dedup_sorted(next, tol);
    }
    let mut magnitudes: Vec<f64> = signed.iter().map(|w| w.abs()).collect();
    magnitudes.sort_by(f64::total_cmp);
    let magnitudes = dedup_sorted(magnitudes, tol);

    let positive: Vec<f64> = magnitudes.into_iter().filter(|&w| w > tol).collect();
    let mut values: Vec<f64> = positive.iter().rev().map(|w| -w).collect();
    values.push(0.0);
    values.extend_from_slice(&positive);
    FrequencySpectrum {
        values,
        dedup_tolerance: tol,
    }
}

/// Merge runs of sorted values whose consecutive gaps are within `tol`,
/// keeping the first member of each run.
fn dedup_sorted(sorted: Vec<f64>, tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(sorted.len());
    let mut last = f64::NEG_INFINITY;
    for v in sorted {
        if v - last > tol {
            out.push(v);
        }
        last = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unary_spectrum() {
        let s = spectrum_of(&[1.0, 1.0, 1.0], DEFAULT_DEDUP_TOLERANCE);
        assert_eq!(s.values, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn ternary_spectrum_is_dense_integer_grid() {
        let s = spectrum_of(&[1.0, 3.0, 9.0], DEFAULT_DEDUP_TOLERANCE);
        let expected: Vec<f64> = (-13..=13).map(f64::from).collect();
        assert_eq!(s.values, expected);
        assert_eq!(s.nonnegative().len(), 14);
        assert_eq!(s.max_frequency(), 13.0);
    }

    #[test]
    fn zero_prefactors_collapse_to_dc() {
        assert_eq!(spectrum_of(&[0.0, 0.0], 1e-9).values, vec![0.0]);
        assert_eq!(spectrum_of(&[], 1e-9).values, vec![0.0]);
    }

    #[test]
    fn negative_prefactor_same_as_positive() {
        let a = spectrum_of(&[-1.2, 3.0], 1e-9);
        let b = spectrum_of(&[1.2, 3.0], 1e-9);
        assert_eq!(a, b);
    }
}
