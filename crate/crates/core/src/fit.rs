//! Small numerical helpers shared by the experiments.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least {need} samples for a fit, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("abscissae are degenerate")]
    Degenerate,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit, FitError> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return Err(FitError::TooFewSamples { got: n, need: 2 });
    }
    if let Some(k) = (0..n).find(|&k| !xs[k].is_finite() || !ys[k].is_finite()) {
        return Err(FitError::NonFinite(k));
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs[..n].iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs[..n]
        .iter()
        .zip(&ys[..n])
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    if sxx <= f64::EPSILON * n as f64 * (1.0 + mx * mx) {
        return Err(FitError::Degenerate);
    }
    let slope = sxy / sxx;
    Ok(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

/// Slope of `ln y` against `x`; every `y` must be positive.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> Result<f64, FitError> {
    let logs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    Ok(fit_line(xs, &logs)?.slope)
}

/// Observed convergence order from errors at successively halved steps.
pub fn observed_order(coarse_err: f64, fine_err: f64) -> f64 {
    (coarse_err / fine_err).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.75 * x).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope + 0.75).abs() < 1e-14);
        assert!((f.intercept - 2.5).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            fit_line(&[1.0], &[1.0]),
            Err(FitError::TooFewSamples { .. })
        ));
        assert_eq!(
            fit_line(&[1.0, 1.0], &[0.0, 2.0]),
            Err(FitError::Degenerate)
        );
        assert_eq!(
            fit_line(&[0.0, 1.0], &[0.0, f64::NAN]),
            Err(FitError::NonFinite(1))
        );
    }
}
