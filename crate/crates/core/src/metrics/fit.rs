//! Power-law fitting on log-log axes.

use crate::error::{Error, Result};

/// Result of fitting y = coefficient · x^exponent.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    pub coefficient: f64,
    pub exponent: f64,
    /// RMS residual of the fit in log space.
    pub residual: f64,
}

/// Ordinary least squares on (ln x, ln y).
///
/// Requires at least three points with strictly positive coordinates.
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::NotEnoughPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::NonPositiveFitData);
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x: f64 = logs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let cov: f64 = logs
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let exponent = cov / var_x;
    let intercept = mean_y - exponent * mean_x;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - (intercept + exponent * p.0)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        coefficient: intercept.exp(),
        exponent,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_planted_cubic() {
        let points: Vec<(f64, f64)> = (1..=8)
            .map(|k| {
                let x = 0.05 * k as f64;
                (x, 2.0 * x.powi(3))
            })
            .collect();
        let fit = power_law_fit(&points).unwrap();
        assert!((fit.coefficient - 2.0).abs() < 1e-9);
        assert!((fit.exponent - 3.0).abs() < 1e-9);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn rejects_small_or_nonpositive_data() {
        assert!(matches!(
            power_law_fit(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::NotEnoughPoints { .. })
        ));
        assert!(matches!(
            power_law_fit(&[(1.0, 1.0), (2.0, 2.0), (0.0, 3.0)]),
            Err(Error::NonPositiveFitData)
        ));
        assert!(matches!(
            power_law_fit(&[(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)]),
            Err(Error::NonPositiveFitData)
        ));
    }
}
