use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::quantum::C64;
use crate::rng;

/// `t(x) = c0 + sum_i [a_i cos(w_i x) + b_i sin(w_i x)]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub frequencies: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c0: f64,
}

impl TargetSpec {
    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate_target(self, x)
    }

    /// Complex-exponential form: pairs `(w, c_w)` with `c_{+-w} = (a -+ i b)/2`
    /// plus `(0, c0)`.
    pub fn complex_terms(&self) -> Vec<(f64, C64)> {
        let mut terms = vec![(0.0, C64::new(self.c0, 0.0))];
        for ((&w, &a), &b) in self.frequencies.iter().zip(&self.a).zip(&self.b) {
            terms.push((w, C64::new(a, -b) * 0.5));
            terms.push((-w, C64::new(a, b) * 0.5));
        }
        terms
    }
}

/// Draw `c0`, `a_i`, `b_i` uniformly from `[0, 1)`.
///
/// Draw order on the seed's stream: `c0`, then `(a_i, b_i)` per frequency.
pub fn make_target(frequencies: &[f64], seed: u64) -> TargetSpec {
    let mut stream = rng::stream(seed);
    let c0 = stream.random::<f64>();
    let mut a = Vec::with_capacity(frequencies.len());
    let mut b = Vec::with_capacity(frequencies.len());
    for _ in frequencies {
        a.push(stream.random::<f64>());
        b.push(stream.random::<f64>());
    }
    TargetSpec {
        frequencies: frequencies.to_vec(),
        a,
        b,
        c0,
    }
}

pub fn evaluate_target(spec: &TargetSpec, x: f64) -> f64 {
    spec.c0
        + spec
            .frequencies
            .iter()
            .zip(&spec.a)
            .zip(&spec.b)
            .map(|((&w, &a), &b)| {
                let (s, c) = (w * x).sin_cos();
                a * c + b * s
            })
            .sum::<f64>()
}

/// Shifted frequencies together with the offsets that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedSpectrum {
    pub frequencies: Vec<f64>,
    pub offsets: Vec<f64>,
}

/// Add an independent `N(mu, 1)` offset to every frequency.
pub fn shift_spectrum(frequencies: &[f64], mu: f64, seed: u64) -> ShiftedSpectrum {
    shift_spectrum_with_sigma(frequencies, mu, 1.0, seed)
}

/// As [`shift_spectrum`] with an explicit standard deviation; `sigma = 0`
/// gives the deterministic shift by exactly `mu`.
pub fn shift_spectrum_with_sigma(
    frequencies: &[f64],
    mu: f64,
    sigma: f64,
    seed: u64,
) -> ShiftedSpectrum {
    let offsets: Vec<f64> = if sigma == 0.0 {
        vec![mu; frequencies.len()]
    } else {
        let normal = Normal::new(mu, sigma).expect("finite positive standard deviation");
        let mut stream = rng::stream(seed);
        frequencies
            .iter()
            .map(|_| normal.sample(&mut stream))
            .collect()
    };
    ShiftedSpectrum {
        frequencies: frequencies
            .iter()
            .zip(&offsets)
            .map(|(w, o)| w + o)
            .collect(),
        offsets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_coefficient_pairs() {
        let t = make_target(&[1.0, 1.2, 3.0], 5);
        assert_eq!(t.a.len(), 3);
        assert_eq!(t.b.len(), 3);
        assert_eq!(t, make_target(&[1.0, 1.2, 3.0], 5));
        assert_ne!(t, make_target(&[1.0, 1.2, 3.0], 6));
    }

    #[test]
    fn zero_coefficients_evaluate_to_zero() {
        let t = TargetSpec {
            frequencies: vec![1.0, 2.0],
            a: vec![0.0; 2],
            b: vec![0.0; 2],
            c0: 0.0,
        };
        for x in [-2.0, 0.0, 1.3] {
            assert_eq!(evaluate_target(&t, x), 0.0);
        }
    }

    #[test]
    fn single_cosine_at_origin() {
        let t = TargetSpec {
            frequencies: vec![2.0],
            a: vec![1.0],
            b: vec![0.0],
            c0: 1.0,
        };
        assert_eq!(evaluate_target(&t, 0.0), 2.0);
    }

    #[test]
    fn deterministic_shift_by_ten() {
        let s = shift_spectrum_with_sigma(&[1.0, 1.2, 3.0], 10.0, 0.0, 0);
        assert_eq!(s.frequencies, vec![11.0, 11.2, 13.0]);
        let z = shift_spectrum_with_sigma(&[1.0, 1.2, 3.0], 0.0, 0.0, 0);
        assert_eq!(z.frequencies, vec![1.0, 1.2, 3.0]);
        assert!(z.offsets.iter().all(|&o| o == 0.0));
    }

    #[test]
    fn shift_records_offsets() {
        let s = shift_spectrum(&[1.0, 2.0], 4.0, 11);
        for ((f, o), base) in s.frequencies.iter().zip(&s.offsets).zip([1.0, 2.0]) {
            assert_eq!(*f, base + o);
        }
        assert_eq!(s, shift_spectrum(&[1.0, 2.0], 4.0, 11));
    }
}
