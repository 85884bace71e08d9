//! Sample moments and a normality check for replicate traces.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::sum::compensated_sum;
use crate::error::{Error, Result};

pub const MIN_DIAGNOSTIC_SAMPLES: usize = 100;

/// Mean and unbiased variance. The mean is taken relative to the first
/// sample, so a constant ensemble has variance exactly zero.
pub fn mean_and_variance(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    let m = samples.len() as f64;
    let x0 = samples[0];
    let mean = x0 + compensated_sum(samples.iter().map(|x| x - x0)) / m;
    let ss = compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
    Ok((mean, ss / (m - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalityDiagnostics {
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub ks_statistic: Option<f64>,
    /// Zero sample variance; the other fields are then `None`.
    pub degenerate: bool,
}

/// Standardized third and fourth moments and the KS distance to the fitted
/// normal law.
pub fn normality_diagnostics(samples: &[f64]) -> Result<NormalityDiagnostics> {
    if samples.len() < MIN_DIAGNOSTIC_SAMPLES {
        return Err(Error::domain(format!(
            "normality diagnostics need at least {MIN_DIAGNOSTIC_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("samples must be finite"));
    }
    let (mean, var) = mean_and_variance(samples)?;
    if var == 0.0 {
        return Ok(NormalityDiagnostics {
            skewness: None,
            excess_kurtosis: None,
            ks_statistic: None,
            degenerate: true,
        });
    }
    let m = samples.len() as f64;
    let c2 = compensated_sum(samples.iter().map(|x| (x - mean).powi(2))) / m;
    let c3 = compensated_sum(samples.iter().map(|x| (x - mean).powi(3))) / m;
    let c4 = compensated_sum(samples.iter().map(|x| (x - mean).powi(4))) / m;

    let normal = Normal::new(mean, var.sqrt()).map_err(|e| Error::domain(e.to_string()))?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let ks = sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = normal.cdf(x);
        let lo = i as f64 / m;
        let hi = (i + 1) as f64 / m;
        d.max(f - lo).max(hi - f)
    });

    Ok(NormalityDiagnostics {
        skewness: Some(c3 / c2.powf(1.5)),
        excess_kurtosis: Some(c4 / (c2 * c2) - 3.0),
        ks_statistic: Some(ks),
        degenerate: false,
    })
}
