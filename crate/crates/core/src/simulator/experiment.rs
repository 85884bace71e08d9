//! Replicated Monte Carlo runs over a ladder of matrix sizes.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expectation::{exact_expected_trace, EXPECTATION_MAX_DEGREE, EXPECTATION_MAX_N};
use super::stats::{mean_and_variance, normality_diagnostics, MIN_DIAGNOSTIC_SAMPLES};
use super::trace::TraceEngine;
use super::{sample_potential, trace_poly_with};
use crate::error::{Error, Result};
use crate::moments::{Distribution, RandomStream};
use crate::polyspace::Polynomial;
use crate::predictor::{predict, RegimePrediction};

/// How replicate streams relate across sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeCoupling {
    /// Stream keyed by `(seed, j)`; size `N` uses its first `N` draws, so the
    /// potentials at different sizes are truncations of one sequence.
    #[default]
    Nested,
    /// Stream keyed by `(seed, N, j)`.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub polynomial: Polynomial,
    pub alpha: f64,
    #[serde(rename = "distribution")]
    pub dist: Distribution,
    pub sizes: Vec<u64>,
    pub replicates: usize,
    #[serde(rename = "seed")]
    pub master_seed: u64,
    /// Worker threads; `None` uses every available core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub trace_engine: TraceEngine,
    #[serde(default)]
    pub size_coupling: SizeCoupling,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.sizes.is_empty() {
            return bad("sizes must be nonempty".into());
        }
        if self.sizes[0] == 0 {
            return bad("sizes must be at least 1".into());
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes must be strictly increasing".into());
        }
        if self.replicates < 2 {
            return bad(format!(
                "replicates must be at least 2, got {}",
                self.replicates
            ));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if self.polynomial.is_constant() {
            return bad("polynomial must be nonconstant".into());
        }
        Ok(())
    }

    /// Stream for replicate `j` (1-based) at size `n`.
    pub fn stream(&self, n: u64, j: u64) -> RandomStream {
        match self.size_coupling {
            SizeCoupling::Nested => RandomStream::substream(self.master_seed, &[j]),
            SizeCoupling::Independent => RandomStream::substream(self.master_seed, &[n, j]),
        }
    }
}

/// One row per matrix size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeResult {
    pub n: u64,
    pub replicates: usize,
    pub empirical_mean: f64,
    /// Absent when the size or degree exceeds the oracle's caps.
    pub exact_mean: Option<f64>,
    pub empirical_variance: f64,
    pub g_sq: Option<f64>,
    /// `empirical_variance / g_sq`; absent when supercritical.
    pub normalized_variance: Option<f64>,
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
    pub ks_statistic: Option<f64>,
    pub degenerate: bool,
    pub wall_time_ms: f64,
    /// Replicate traces in replicate order.
    #[serde(skip)]
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub prediction: RegimePrediction,
    pub rows: Vec<SizeResult>,
}

/// Trace values for replicates `1..=M` at size `n`, in replicate order.
pub fn replicate_traces(cfg: &ExperimentConfig, n: u64) -> Result<Vec<f64>> {
    let one = |j: u64| -> Result<f64> {
        let mut rng = cfg.stream(n, j);
        let v = sample_potential(cfg.alpha, n as usize, &cfg.dist, &mut rng)?;
        trace_poly_with(&v.values, &cfg.polynomial, cfg.trace_engine)
    };
    let m = cfg.replicates as u64;
    match cfg.workers {
        Some(1) => (1..=m).map(one).collect(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| (1..=m).into_par_iter().map(one).collect()),
        None => (1..=m).into_par_iter().map(one).collect(),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let prediction = predict(&cfg.polynomial, cfg.alpha, &cfg.dist.moments())?;
    let degree = cfg.polynomial.degree().unwrap_or(0);

    let mut rows = Vec::with_capacity(cfg.sizes.len());
    for &n in &cfg.sizes {
        let started = Instant::now();
        let samples = replicate_traces(cfg, n)?;
        let (empirical_mean, empirical_variance) = mean_and_variance(&samples)?;
        let diag = if samples.len() >= MIN_DIAGNOSTIC_SAMPLES {
            Some(normality_diagnostics(&samples)?)
        } else {
            None
        };
        let exact_mean = if degree <= EXPECTATION_MAX_DEGREE && n <= EXPECTATION_MAX_N {
            Some(exact_expected_trace(
                &cfg.polynomial,
                cfg.alpha,
                n,
                &cfg.dist,
            )?)
        } else {
            None
        };
        let g_sq = prediction.normalization(n)?;
        let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
        rows.push(SizeResult {
            n,
            replicates: cfg.replicates,
            empirical_mean,
            exact_mean,
            empirical_variance,
            g_sq,
            normalized_variance: g_sq.map(|g| empirical_variance / g),
            skewness: diag.and_then(|d| d.skewness),
            excess_kurtosis: diag.and_then(|d| d.excess_kurtosis),
            ks_statistic: diag.and_then(|d| d.ks_statistic),
            degenerate: empirical_variance == 0.0,
            wall_time_ms,
            samples,
        });
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        prediction,
        rows,
    })
}
