//! Sampling the operator, evaluating traces, and Monte Carlo experiments.

mod expectation;
mod experiment;
mod stats;
mod sum;
mod symbolic;
mod trace;

use serde::{Deserialize, Serialize};

pub use expectation::{
    exact_expected_trace, MomentSource, EXPECTATION_MAX_DEGREE, EXPECTATION_MAX_N,
};
pub use experiment::{
    replicate_traces, run_experiment, ExperimentConfig, ExperimentResult, SizeCoupling, SizeResult,
};
pub use stats::{
    mean_and_variance, normality_diagnostics, NormalityDiagnostics, MIN_DIAGNOSTIC_SAMPLES,
};
pub use sum::{compensated_sum, CompensatedSum};
pub use symbolic::{expand_trace_symbolic, SYMBOLIC_MAX_K, SYMBOLIC_MAX_N};
pub use trace::{
    power_traces, power_traces_banded, power_traces_dense, trace_poly_with, TraceEngine,
    MAX_DENSE_N, MAX_TRACE_DEGREE,
};

use crate::error::{Error, Result};
use crate::moments::{Distribution, RandomStream};
use crate::polyspace::Polynomial;

/// `V(n) = X_n / n^alpha` for `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub alpha: f64,
    pub values: Vec<f64>,
}

impl PotentialSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Draws `N` variates from `rng` in site order.
pub fn sample_potential(
    alpha: f64,
    n: usize,
    dist: &Distribution,
    rng: &mut RandomStream,
) -> Result<PotentialSample> {
    if n == 0 {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::domain(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    let values = (1..=n)
        .map(|i| {
            let x = dist.sample(rng);
            if alpha == 0.0 {
                x
            } else {
                x * (i as f64).powf(-alpha)
            }
        })
        .collect();
    Ok(PotentialSample { alpha, values })
}

/// `Tr P(H)` with the banded engine.
pub fn trace_poly(v: &PotentialSample, p: &Polynomial) -> Result<f64> {
    trace_poly_with(&v.values, p, TraceEngine::Banded)
}
