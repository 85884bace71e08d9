//! `Tr P(H)` for the symmetric tridiagonal `H` with diagonal `V` and unit
//! off-diagonals, without eigenvalues.

use serde::{Deserialize, Serialize};

use super::sum::{compensated_sum, CompensatedSum};
use crate::error::{Error, Result};
use crate::polyspace::Polynomial;

/// Highest polynomial degree accepted by the trace engines.
pub const MAX_TRACE_DEGREE: usize = 64;

/// Largest matrix the dense oracle will build.
pub const MAX_DENSE_N: usize = 1024;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEngine {
    #[default]
    Banded,
    DenseOracle,
}

/// Upper band of a symmetric matrix: `bands[o][r] = A[r][r + o]`.
struct SymBand {
    n: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBand {
    fn identity(n: usize) -> Self {
        Self {
            n,
            bands: vec![vec![1.0; n]],
        }
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> f64 {
        let (r, o) = if c >= r { (r, c - r) } else { (c, r - c) };
        self.bands.get(o).map_or(0.0, |b| b[r])
    }

    /// `self * H`, whose bandwidth grows by one.
    fn times_h(&self, diag: &[f64]) -> Self {
        let n = self.n;
        let width = (self.bands.len()).min(n - 1);
        let mut bands = Vec::with_capacity(width + 1);
        for o in 0..=width {
            let mut band = vec![0.0; n - o];
            for (r, slot) in band.iter_mut().enumerate() {
                let c = r + o;
                let left = if c > 0 { self.get(r, c - 1) } else { 0.0 };
                let right = if c + 1 < n { self.get(r, c + 1) } else { 0.0 };
                *slot = left + self.get(r, c) * diag[c] + right;
            }
            bands.push(band);
        }
        Self { n, bands }
    }

    fn trace(&self) -> f64 {
        compensated_sum(self.bands[0].iter().copied())
    }
}

fn check_inputs(diag: &[f64], max_power: usize) -> Result<()> {
    if diag.is_empty() {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    if max_power > MAX_TRACE_DEGREE {
        return Err(Error::Capacity {
            what: "trace degree",
            requested: max_power,
            limit: MAX_TRACE_DEGREE,
        });
    }
    Ok(())
}

/// `[Tr H^0, ..., Tr H^max_power]` by repeated banded multiplication, `O(m^2 N)`.
pub fn power_traces_banded(diag: &[f64], max_power: usize) -> Result<Vec<f64>> {
    check_inputs(diag, max_power)?;
    let mut traces = Vec::with_capacity(max_power + 1);
    let mut power = SymBand::identity(diag.len());
    traces.push(diag.len() as f64);
    for _ in 0..max_power {
        power = power.times_h(diag);
        traces.push(power.trace());
    }
    Ok(traces)
}

/// Same traces from dense matrix powers; an oracle for small `N`.
pub fn power_traces_dense(diag: &[f64], max_power: usize) -> Result<Vec<f64>> {
    check_inputs(diag, max_power)?;
    let n = diag.len();
    if n > MAX_DENSE_N {
        return Err(Error::Capacity {
            what: "dense matrix size",
            requested: n,
            limit: MAX_DENSE_N,
        });
    }
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = diag[i];
        if i + 1 < n {
            h[i * n + i + 1] = 1.0;
            h[(i + 1) * n + i] = 1.0;
        }
    }
    let mut power = vec![0.0; n * n];
    for i in 0..n {
        power[i * n + i] = 1.0;
    }
    let mut traces = vec![n as f64];
    let mut next = vec![0.0; n * n];
    for _ in 0..max_power {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += power[i * n + l] * h[l * n + j];
                }
                next[i * n + j] = acc;
            }
        }
        std::mem::swap(&mut power, &mut next);
        traces.push(compensated_sum((0..n).map(|i| power[i * n + i])));
    }
    Ok(traces)
}

pub fn power_traces(diag: &[f64], max_power: usize, engine: TraceEngine) -> Result<Vec<f64>> {
    match engine {
        TraceEngine::Banded => power_traces_banded(diag, max_power),
        TraceEngine::DenseOracle => power_traces_dense(diag, max_power),
    }
}

/// `sum_k a_k Tr H^k`.
pub fn trace_poly_with(diag: &[f64], p: &Polynomial, engine: TraceEngine) -> Result<f64> {
    let m = p.degree().unwrap_or(0);
    let traces = power_traces(diag, m, engine)?;
    let mut acc = CompensatedSum::default();
    for (k, t) in traces.iter().enumerate() {
        let a = p.coeff(k);
        if a != 0.0 {
            acc.add(a * t);
        }
    }
    Ok(acc.value())
}
