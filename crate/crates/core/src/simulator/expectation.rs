//! `E[Tr P(H)]` summed exactly over closed paths, boundary included.

use super::sum::CompensatedSum;
use crate::error::{Error, Result};
use crate::moments::{Distribution, MomentSet};
use crate::paths::closed_path_shapes;
use crate::polyspace::Polynomial;

pub const EXPECTATION_MAX_DEGREE: usize = 12;
pub const EXPECTATION_MAX_N: u64 = 1_000_000;

/// Source of raw moments `E[X^j]`.
pub trait MomentSource {
    fn raw(&self, j: u32) -> Result<f64>;
}

impl MomentSource for MomentSet {
    fn raw(&self, j: u32) -> Result<f64> {
        self.get(j)
    }
}

/// Any order; needed when a path has more than six flat steps on one level.
impl MomentSource for Distribution {
    fn raw(&self, j: u32) -> Result<f64> {
        Ok(if j == 0 { 1.0 } else { self.raw_moment(j) })
    }
}

/// `E[Tr H^k]` for one `k`, with `w[n - 1] = n^{-alpha}`.
fn expected_power_trace<M: MomentSource + ?Sized>(k: usize, w: &[f64], mom: &M) -> Result<f64> {
    let n = w.len() as i64;
    if k == 0 {
        return Ok(n as f64);
    }
    let shapes = closed_path_shapes(k, EXPECTATION_MAX_DEGREE)?;
    // Deterministic order so the floating-point sum is reproducible.
    let mut shapes: Vec<_> = shapes.into_iter().collect();
    shapes.sort_by(|a, b| {
        (a.0.min_level, a.0.max_level, &a.0.profile).cmp(&(
            b.0.min_level,
            b.0.max_level,
            &b.0.profile,
        ))
    });

    let mut total = CompensatedSum::default();
    for (shape, count) in shapes {
        let mut weight = count as f64;
        for (_, mult) in shape.profile.iter() {
            weight *= mom.raw(mult)?;
        }
        if weight == 0.0 {
            continue;
        }
        // 1-based start sites i with 1 <= i + min and i + max <= N.
        let first = 1 - shape.min_level;
        let last = n - shape.max_level;
        let mut over_starts = CompensatedSum::default();
        for i in first..=last {
            let mut term = 1.0;
            for (h, mult) in shape.profile.iter() {
                term *= w[(i + h - 1) as usize].powi(mult as i32);
            }
            over_starts.add(term);
        }
        total.add(weight * over_starts.value());
    }
    Ok(total.value())
}

/// Exact expectation of `Tr P(H)` for `V(n) = X_n n^{-alpha}`.
pub fn exact_expected_trace<M: MomentSource + ?Sized>(
    p: &Polynomial,
    alpha: f64,
    n: u64,
    mom: &M,
) -> Result<f64> {
    let deg = p.degree().unwrap_or(0);
    if deg > EXPECTATION_MAX_DEGREE {
        return Err(Error::Capacity {
            what: "expectation degree",
            requested: deg,
            limit: EXPECTATION_MAX_DEGREE,
        });
    }
    if n > EXPECTATION_MAX_N {
        return Err(Error::Capacity {
            what: "expectation matrix size",
            requested: n as usize,
            limit: EXPECTATION_MAX_N as usize,
        });
    }
    if n == 0 {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::domain(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    let w: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-alpha)).collect();
    let mut acc = CompensatedSum::default();
    for k in 0..=deg {
        let a = p.coeff(k);
        if a != 0.0 {
            acc.add(a * expected_power_trace(k, &w, mom)?);
        }
    }
    Ok(acc.value())
}
