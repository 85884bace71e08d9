//! Self-check suites behind `specfluct verify`.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::moments::{Distribution, RandomStream};
use crate::paths::{MultiIndex, PathCounter};
use crate::polyspace::{decompose, inner_product, perp_basis, q_polynomial, Polynomial};
use crate::predictor::{c_formula_matrix, w_vector_covariance};
use crate::simulator::{
    exact_expected_trace, expand_trace_symbolic, power_traces_dense, trace_poly_with, TraceEngine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Paths,
    Polyspace,
    Predictor,
    Oracles,
    All,
}

/// Result of one named invariant; `failure` holds the first counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

impl Check {
    fn from(name: &'static str, outcome: Result<Option<String>>) -> Self {
        let failure = match outcome {
            Ok(f) => f,
            Err(e) => Some(format!("error: {e}")),
        };
        Self { name, failure }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Paths => paths_suite(),
        Suite::Polyspace => polyspace_suite(),
        Suite::Predictor => predictor_suite(),
        Suite::Oracles => oracles_suite(),
        Suite::All => [
            paths_suite(),
            polyspace_suite(),
            predictor_suite(),
            oracles_suite(),
        ]
        .concat(),
    }
}

pub const CLOSED_FORM_K_MAX: usize = 14;

/// Closed forms against enumeration for every `k <= k_max`.
pub fn closed_forms_agree(k_max: usize) -> Result<Option<String>> {
    let counter = PathCounter::new(k_max.max(1));
    for k in 1..=k_max {
        for order in 0..=2u32 {
            let brute = counter.all_profiles(k, order)?;
            // Every profile with a closed form must agree with enumeration.
            for (beta, &count) in &brute {
                if let Some(closed) = counter.count_closed(k, beta)? {
                    if closed != count {
                        return Ok(Some(format!(
                            "k={k} beta={beta}: closed {closed}, brute {count}"
                        )));
                    }
                }
            }
            // Closed forms must vanish where no path exists.
            let candidates: Vec<MultiIndex> = match order {
                0 => vec![MultiIndex::zero()],
                1 => vec![MultiIndex::delta(0)],
                _ => (0..=k as i64 + 1)
                    .map(|j| &MultiIndex::delta(0) + &MultiIndex::delta(j))
                    .collect(),
            };
            for beta in candidates {
                let closed = counter.count_closed(k, &beta)?.unwrap_or(0);
                let want = brute.get(&beta).copied().unwrap_or(0);
                if closed != want {
                    return Ok(Some(format!(
                        "k={k} beta={beta}: closed {closed}, brute {want}"
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// `sum_j p^k(delta + delta^j)` against its closed total for even `k`.
pub fn two_flat_identity(k_max: usize) -> Result<Option<String>> {
    let counter = PathCounter::new(k_max.max(2));
    for k in (2..=k_max).step_by(2) {
        let total: u128 = counter.all_profiles(k, 2)?.values().sum();
        let closed = counter.two_flat_total(k)?;
        if total != closed {
            return Ok(Some(format!("k={k}: enumerated {total}, closed {closed}")));
        }
    }
    Ok(None)
}

fn spot_values() -> Result<Option<String>> {
    let c = PathCounter::default();
    let cases = [
        (3, MultiIndex::delta(0), 6u128),
        (4, MultiIndex::from_pairs([(0, 2)]), 8),
        (7, MultiIndex::delta(0), 140),
    ];
    for (k, beta, want) in cases {
        let closed = c.count_closed(k, &beta)?;
        let brute = c.count_bruteforce(k, &beta)?;
        if closed != Some(want) || brute != want {
            return Ok(Some(format!(
                "k={k} beta={beta}: closed {closed:?}, brute {brute}, want {want}"
            )));
        }
    }
    Ok(None)
}

fn paths_suite() -> Vec<Check> {
    vec![
        Check::from(
            "closed forms match enumeration for k <= 14",
            closed_forms_agree(CLOSED_FORM_K_MAX),
        ),
        Check::from(
            "two-flat aggregation identity for even k <= 14",
            two_flat_identity(CLOSED_FORM_K_MAX),
        ),
        Check::from("spot values p3(d)=6, p4(2d)=8, p7(d)=140", spot_values()),
    ]
}

/// `<P_k, Q_m>` for odd `3 <= k <= m <= m_max`.
pub fn orthogonality(m_max: usize, tol: f64) -> Result<Option<String>> {
    for m in (3..=m_max).step_by(2) {
        let q = q_polynomial(m)?;
        for (i, pk) in perp_basis(m)?.iter().enumerate() {
            let ip = inner_product(pk, &q);
            if ip.abs() > tol {
                return Ok(Some(format!("<P_{}, Q_{m}> = {ip}", 3 + 2 * i)));
            }
        }
    }
    Ok(None)
}

/// Decomposition reconstructs `P` for a fixed set of seeded random inputs.
pub fn reconstruction(count: usize, tol: f64) -> Result<Option<String>> {
    let mut rng = RandomStream::new(0x7e57, 1);
    for _ in 0..count {
        let deg = 1 + (rng.next_f64() * 11.0) as usize;
        let p = Polynomial::new((0..=deg).map(|_| 2.0 * rng.next_f64() - 1.0).collect());
        let d = decompose(&p)?;
        let back = d.reconstruct();
        let err = back.sub(&p).norm();
        let perp_ip = inner_product(&d.qperp_part, &q_polynomial(d.m)?);
        if err > tol * p.norm().max(1.0) || perp_ip.abs() > tol * q_polynomial(d.m)?.norm() {
            return Ok(Some(format!(
                "P={p}: reconstruction error {err}, <qperp, Q> = {perp_ip}"
            )));
        }
    }
    Ok(None)
}

fn polyspace_suite() -> Vec<Check> {
    vec![
        Check::from(
            "<P_k, Q_m> = 0 for odd 3 <= k <= m <= 11",
            orthogonality(11, 1e-12),
        ),
        Check::from("decomposition reconstructs P", reconstruction(200, 1e-12)),
    ]
}

/// A mean-zero atom law with a handful of random atoms.
pub fn random_atoms(rng: &mut RandomStream) -> Result<Distribution> {
    let r = 2 + (rng.next_f64() * 4.0) as usize;
    let mut values: Vec<f64> = (0..r).map(|_| 4.0 * rng.next_f64() - 2.0).collect();
    let mut probs: Vec<f64> = (0..r).map(|_| 0.05 + rng.next_f64()).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
    values.iter_mut().for_each(|v| *v -= mean);
    Distribution::atoms(values, probs)
}

/// `w_vector_covariance` against `c_formula_matrix` for the standard laws and
/// `random` atom laws.
pub fn w_identity(random: usize, tol: f64) -> Result<Option<String>> {
    let mut laws = vec![Distribution::rademacher(1.0)?, Distribution::uniform(1.0)?];
    let mut rng = RandomStream::new(0x3c3c, 4);
    for _ in 0..random {
        laws.push(random_atoms(&mut rng)?);
    }
    for law in laws {
        let mom = law.moments();
        let w = w_vector_covariance(&mom)?;
        let c = c_formula_matrix(&mom);
        for a in 0..2 {
            for b in 0..2 {
                if (w[a][b] - c[a][b]).abs() > tol * c[a][b].abs().max(1.0) {
                    return Ok(Some(format!(
                        "{law}: W[{a}][{b}]={} C[{a}][{b}]={}",
                        w[a][b], c[a][b]
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn predictor_suite() -> Vec<Check> {
    vec![Check::from(
        "W covariance equals the C matrix",
        w_identity(100, 1e-12),
    )]
}

/// Interior coefficients of `Tr H^k` at size `n` equal `p^k(beta)` for every
/// nonzero `beta` with `p^k(beta) > 0`, `k <= k_max`.
pub fn coefficient_theorem(n: usize, k_max: usize) -> Result<Option<String>> {
    let counter = PathCounter::new(k_max.max(1));
    for k in 1..=k_max {
        let expansion = expand_trace_symbolic(n, k)?;
        let mut expected: BTreeMap<MultiIndex, u128> = BTreeMap::new();
        for order in 1..=k as u32 {
            expected.extend(counter.all_profiles(k, order)?);
        }
        for (beta, &count) in &expected {
            let brute = counter.count_bruteforce(k, beta)?;
            if brute != count {
                return Ok(Some(format!(
                    "k={k} beta={beta}: profile table {count}, brute {brute}"
                )));
            }
            let span = beta.highest_level().unwrap_or(0);
            // Shifts whose support lies in [k, n - k].
            for i in k as i64..=(n as i64 - k as i64 - span) {
                let got = expansion.get(&beta.shifted(i)).copied().unwrap_or(0);
                if got != count as i128 {
                    return Ok(Some(format!(
                        "k={k} beta={beta} shift {i}: coefficient {got}, paths {count}"
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Only monomials of degree congruent to `k` mod 2 appear.
pub fn parity(n: usize, k_max: usize) -> Result<Option<String>> {
    for k in 0..=k_max {
        for beta in expand_trace_symbolic(n, k)?.keys() {
            if (beta.order() as usize + k) % 2 == 1 {
                return Ok(Some(format!("k={k}: monomial {beta}")));
            }
        }
    }
    Ok(None)
}

/// Banded against dense traces on seeded random instances.
pub fn engine_equivalence(instances: usize, tol: f64) -> Result<Option<String>> {
    let mut rng = RandomStream::new(0xe9e9, 2);
    for _ in 0..instances {
        let n = 1 + (rng.next_f64() * 32.0) as usize;
        let deg = 1 + (rng.next_f64() * 8.0) as usize;
        let v: Vec<f64> = (0..n).map(|_| 2.0 * rng.next_f64() - 1.0).collect();
        let p = Polynomial::new((0..=deg).map(|_| 2.0 * rng.next_f64() - 1.0).collect());
        let a = trace_poly_with(&v, &p, TraceEngine::Banded)?;
        let b = trace_poly_with(&v, &p, TraceEngine::DenseOracle)?;
        // Scale by the size of the individual power traces to be robust to cancellation.
        let scale = power_traces_dense(&v, deg)?
            .iter()
            .enumerate()
            .map(|(k, t)| (p.coeff(k) * t).abs())
            .sum::<f64>()
            .max(b.abs());
        if (a - b).abs() > tol * scale.max(1.0) {
            return Ok(Some(format!("N={n} P={p}: banded {a}, dense {b}")));
        }
    }
    Ok(None)
}

/// Path-sum expectation against the symbolic expansion weighted by moments.
pub fn expectation_matches_symbolic() -> Result<Option<String>> {
    let laws = [Distribution::rademacher(1.0)?, Distribution::uniform(1.5)?];
    for law in laws {
        let mom = law.moments();
        for (n, k, alpha) in [(6usize, 4usize, 0.5), (9, 6, 0.3), (5, 5, 0.2)] {
            let e = exact_expected_trace(&Polynomial::monomial(k, 1.0), alpha, n as u64, &mom)?;
            let mut want = 0.0;
            for (beta, c) in expand_trace_symbolic(n, k)? {
                let mut term = c as f64;
                for (site, mult) in beta.iter() {
                    term *= mom.get(mult)? * (site as f64).powf(-alpha * f64::from(mult));
                }
                want += term;
            }
            if (e - want).abs() > 1e-12 * want.abs().max(1.0) {
                return Ok(Some(format!(
                    "{law} N={n} k={k}: paths {e}, symbolic {want}"
                )));
            }
        }
    }
    Ok(None)
}

fn oracles_suite() -> Vec<Check> {
    vec![
        Check::from(
            "symbolic coefficients equal path counts (N=24, k<=8)",
            coefficient_theorem(24, 8),
        ),
        Check::from(
            "only monomials of matching parity (N=12, k<=8)",
            parity(12, 8),
        ),
        Check::from(
            "banded and dense traces agree",
            engine_equivalence(100, 1e-9),
        ),
        Check::from(
            "exact expectation matches symbolic expansion",
            expectation_matches_symbolic(),
        ),
    ]
}
