use nalgebra::{DMatrix, DVector};

use super::circuit::Model;
use super::spectrum::FrequencySpectrum;
use crate::error::{Error, Result};
use crate::quantum::C64;

/// Relative singular-value floor below which a Fourier design matrix is
/// treated as rank deficient.
const RCOND_FLOOR: f64 = 1e-10;

/// Least-squares Fourier coefficients `c_w` with `f(x) ~ sum_w c_w e^{iwx}`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub frequencies: Vec<f64>,
    pub coefficients: Vec<C64>,
    /// Euclidean norm of the fit residual over the sample grid.
    pub residual_norm: f64,
    /// Ratio of largest to smallest singular value of the design matrix.
    pub condition_number: f64,
}

impl CoefficientTable {
    pub fn coefficient(&self, frequency: f64, tol: f64) -> Option<C64> {
        self.frequencies
            .iter()
            .position(|&w| (w - frequency).abs() <= tol)
            .map(|i| self.coefficients[i])
    }

    pub fn evaluate(&self, x: f64) -> C64 {
        self.frequencies
            .iter()
            .zip(&self.coefficients)
            .map(|(&w, &c)| c * C64::from_polar(1.0, w * x))
            .sum()
    }
}

/// Fit samples `(xs, ys)` with complex exponentials at `frequencies`.
pub fn fit_fourier(xs: &[f64], ys: &[f64], frequencies: &[f64]) -> Result<CoefficientTable> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!(
            "{} inputs but {} outputs",
            xs.len(),
            ys.len()
        )));
    }
    if frequencies.is_empty() {
        return Err(Error::Config("no frequencies to fit".into()));
    }
    if xs.len() < frequencies.len() {
        return Err(Error::Dimension(format!(
            "{} samples cannot determine {} coefficients",
            xs.len(),
            frequencies.len()
        )));
    }
    let design = DMatrix::from_fn(xs.len(), frequencies.len(), |r, c| {
        C64::from_polar(1.0, frequencies[c] * xs[r])
    });
    let rhs = DVector::from_iterator(ys.len(), ys.iter().map(|&y| C64::new(y, 0.0)));

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition_number = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if smin <= RCOND_FLOOR * smax {
        let (gap, pair) = closest_pair(frequencies);
        return Err(Error::Conditioning(format!(
            "design matrix condition number {condition_number:.3e}; closest frequencies {:.6} and {:.6} (gap {gap:.3e}) are not resolved on this grid",
            pair.0, pair.1
        )));
    }
    let solution = svd
        .solve(&rhs, RCOND_FLOOR * smax)
        .map_err(|e| Error::Numeric(e.to_string()))?;
    let residual_norm = (&design * &solution - &rhs).norm();
    Ok(CoefficientTable {
        frequencies: frequencies.to_vec(),
        coefficients: solution.iter().copied().collect(),
        residual_norm,
        condition_number,
    })
}

fn closest_pair(frequencies: &[f64]) -> (f64, (f64, f64)) {
    let mut sorted = frequencies.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .windows(2)
        .map(|w| (w[1] - w[0], (w[0], w[1])))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((f64::INFINITY, (sorted[0], sorted[0])))
}

/// Recover the Fourier coefficients of a model's output on `grid`.
pub fn extract_coefficients(
    model: &Model,
    frequencies: &FrequencySpectrum,
    grid: &[f64],
) -> Result<CoefficientTable> {
    let circuit = model.prepare()?;
    let ys = circuit.eval_many(grid);
    fit_fourier(grid, &ys, &frequencies.values)
}
