//! Limiting variances and covariances of centred traces.
//!
//! Each sector of `V_m = Q_m (+) Q_m^perp (+) E_m` has its own critical decay
//! exponent and normalization:
//!
//! | sector      | critical alpha | normalization     |
//! |-------------|----------------|-------------------|
//! | `Q_m`       | 1/2            | `g_{2 alpha}(N)`  |
//! | `E_m`       | 1/4            | `g_{4 alpha}(N)`  |
//! | `Q_m^perp`  | 1/6            | `g_{6 alpha}(N)`  |
//!
//! Below (or at) the critical exponent the normalized statistic is Gaussian
//! with the variance computed here; above it the centred trace converges
//! almost surely and has bounded variance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::MomentSet;
use crate::paths::{path_count, MultiIndex, DEFAULT_K_MAX};
use crate::polyspace::{decompose, inner_product, q_polynomial, Polynomial};

/// Relative threshold below which a sector component is treated as absent.
pub const SECTOR_TOL: f64 = 1e-10;

/// `g_t(N)^2`: `log N` for `t = 1`, `N^(1-t) / (1-t)` for `0 < t < 1`.
pub fn g_norm_sq(t: f64, n: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!(
            "rate exponent must lie in (0, 1], got {t}"
        )));
    }
    if !(n >= 1.0) {
        return Err(Error::domain(format!("N must be at least 1, got {n}")));
    }
    Ok(if t == 1.0 {
        n.ln()
    } else {
        n.powf(1.0 - t) / (1.0 - t)
    })
}

/// `sigma_Q(P)^2 = <P, Q_m>^2 eta^2`.
pub fn sigma_q(p: &Polynomial, mom: &MomentSet) -> Result<f64> {
    let q = q_polynomial(p.padded_degree())?;
    let dot = inner_product(p, &q);
    Ok(dot * dot * mom.eta_sq())
}

fn check_degree(k: usize) -> Result<()> {
    if k > DEFAULT_K_MAX {
        return Err(Error::Capacity {
            what: "monomial degree",
            requested: k,
            limit: DEFAULT_K_MAX,
        });
    }
    Ok(())
}

fn count(k: usize, pairs: &[(i64, u32)]) -> Result<f64> {
    Ok(path_count(k, &MultiIndex::from_pairs(pairs.iter().copied()))? as f64)
}

fn count_u(k: usize, pairs: &[(i64, u32)]) -> Result<u128> {
    path_count(k, &MultiIndex::from_pairs(pairs.iter().copied()))
}

/// Limiting covariance of `Tr H^k` and `Tr H^l` (both even) under `g_{4 alpha}`.
pub fn cov_even(k: usize, l: usize, mom: &MomentSet) -> Result<f64> {
    if k % 2 == 1 || l % 2 == 1 || k < 2 || l < 2 {
        return Err(Error::domain(format!(
            "cov_even needs even k, l >= 2, got ({k}, {l})"
        )));
    }
    check_degree(k.max(l))?;
    let eta4 = mom.m2 * mom.m2;
    let mut total = count(k, &[(0, 2)])? * count(l, &[(0, 2)])? * mom.var_of_square();
    // p^k(delta + delta^s) vanishes once s > (k - 2) / 2.
    for s in 1..=((k.min(l) - 2) / 2) as i64 {
        total += count(k, &[(0, 1), (s, 1)])? * count(l, &[(0, 1), (s, 1)])? * eta4;
    }
    Ok(total)
}

/// The four path-pairing sums entering `M_{k,l}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTerms {
    pub q6: u128,
    pub q33: u128,
    pub q42: u128,
    pub q222: u128,
}

fn check_perp_index(k: usize, l: usize) -> Result<()> {
    if k.is_multiple_of(2) || l.is_multiple_of(2) || k < 3 || l < 3 {
        return Err(Error::domain(format!(
            "q-terms need odd k, l >= 3, got ({k}, {l})"
        )));
    }
    check_degree(k.max(l))
}

/// Evaluates `q_6`, `q_{3,3}`, `q_{4,2}`, `q_{2,2,2}` from memoized path counts.
pub fn q_terms(k: usize, l: usize) -> Result<QTerms> {
    check_perp_index(k, l)?;
    // Every three-flat profile of a length-k path spans at most (k - 3) / 2
    // levels, so the offsets below cover all nonzero terms.
    let reach = ((k.max(l) - 3) / 2) as i64;
    let add = |a: u128, b: u128| a.checked_add(b).ok_or(Error::Overflow("q-term"));
    let mul = |a: u128, b: u128| a.checked_mul(b).ok_or(Error::Overflow("q-term"));

    let triple_k = count_u(k, &[(0, 3)])?;
    let triple_l = count_u(l, &[(0, 3)])?;
    let q6 = mul(triple_k, triple_l)?;

    // 2 delta + delta^t and delta + 2 delta^t
    let two_one = |n: usize, t: i64| count_u(n, &[(0, 2), (t, 1)]);
    let one_two = |n: usize, t: i64| count_u(n, &[(0, 1), (t, 2)]);

    let mut q33 = 0u128;
    let mut q42 = 0u128;
    for t in 1..=reach {
        q33 = add(q33, mul(two_one(k, t)?, one_two(l, t)?)?)?;
        q33 = add(q33, mul(two_one(l, t)?, one_two(k, t)?)?)?;

        q42 = add(q42, mul(triple_k, two_one(l, t)?)?)?;
        q42 = add(q42, mul(triple_l, two_one(k, t)?)?)?;
        q42 = add(q42, mul(triple_k, one_two(l, t)?)?)?;
        q42 = add(q42, mul(triple_l, one_two(k, t)?)?)?;
        q42 = add(q42, mul(two_one(k, t)?, two_one(l, t)?)?)?;
        q42 = add(q42, mul(one_two(k, t)?, one_two(l, t)?)?)?;
    }

    let mut q222 = 0u128;
    for s in 1..=reach {
        for t in 1..=reach {
            q222 = add(q222, mul(two_one(k, s + t)?, two_one(l, t)?)?)?;
            q222 = add(q222, mul(two_one(l, s + t)?, two_one(k, t)?)?)?;
            q222 = add(q222, mul(two_one(k, t)?, one_two(l, s)?)?)?;
            q222 = add(q222, mul(two_one(l, t)?, one_two(k, s)?)?)?;
            q222 = add(q222, mul(one_two(k, s)?, one_two(l, s + t)?)?)?;
            q222 = add(q222, mul(one_two(l, s)?, one_two(k, s + t)?)?)?;
            let spread = [(0, 1), (s, 1), (s + t, 1)];
            q222 = add(q222, mul(count_u(k, &spread)?, count_u(l, &spread)?)?)?;
        }
    }
    Ok(QTerms { q6, q33, q42, q222 })
}

/// `M_{k,l}`, the limiting covariance of `Tr P_k(H)` and `Tr P_l(H)` under `g_{6 alpha}`.
pub fn m_entry(k: usize, l: usize, mom: &MomentSet) -> Result<f64> {
    let q = q_terms(k, l)?;
    let m3sq = mom.m3 * mom.m3;
    Ok(q.q6 as f64 * (mom.m6 - m3sq)
        + q.q33 as f64 * m3sq
        + q.q42 as f64 * mom.m4 * mom.m2
        + q.q222 as f64 * mom.m2.powi(3))
}

/// `sigma_E(P)^2 = <P, C_E P>` for an even polynomial.
pub fn sigma_e(p: &Polynomial, mom: &MomentSet) -> Result<f64> {
    if p.odd_part().norm() > 0.0 {
        return Err(Error::domain("sigma_e needs an even polynomial"));
    }
    let terms: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|&(k, &a)| k >= 2 && k % 2 == 0 && a != 0.0)
        .map(|(k, &a)| (k, a))
        .collect();
    let mut total = 0.0;
    for &(k, a) in &terms {
        for &(l, b) in &terms {
            total += a * b * cov_even(k, l, mom)?;
        }
    }
    Ok(total.max(0.0))
}

/// Coordinates of `P` in the basis `P_3, P_5, ..., P_m` of `Q_m^perp`.
///
/// `P_k = x^k - p^k(delta) x` is triangular against the monomials, so the
/// coordinate of `P_k` is the `x^k` coefficient; the leftover `x` coefficient
/// must vanish, which is exactly the orthogonality to `Q_m`.
pub fn perp_coordinates(p: &Polynomial) -> Result<BTreeMap<usize, f64>> {
    if p.even_part().norm() > SECTOR_TOL * p.norm() {
        return Err(Error::domain(
            "polynomial has an even component, not in Q_m^perp",
        ));
    }
    let q = q_polynomial(p.padded_degree())?;
    if inner_product(p, &q).abs() > SECTOR_TOL * p.norm() * q.norm() {
        return Err(Error::domain("polynomial is not orthogonal to Q_m"));
    }
    Ok(p.coeffs()
        .iter()
        .enumerate()
        .filter(|&(k, &a)| k >= 3 && k % 2 == 1 && a != 0.0)
        .map(|(k, &a)| (k, a))
        .collect())
}

/// `sigma_{Q^perp}(P)^2 = sum_{k,l} a_k a_l M_{k,l}` over the `P_k` coordinates.
pub fn sigma_qperp(p: &Polynomial, mom: &MomentSet) -> Result<f64> {
    let coords = perp_coordinates(p)?;
    let (mut total, mut magnitude) = (0.0, 0.0);
    for (&k, &a) in &coords {
        for (&l, &b) in &coords {
            let term = a * b * m_entry(k, l, mom)?;
            total += term;
            magnitude += term.abs();
        }
    }
    // Cancellation down to roundoff is an exact zero.
    if total <= 64.0 * f64::EPSILON * magnitude {
        return Ok(0.0);
    }
    Ok(total)
}

/// Covariance of `(Tr f(H), Tr g(H))` for the degree-5 basis
/// `f = x^3 - 6x`, `g = x^5/5 - 2x^3 + 6x` of `Q_5^perp`, in closed form.
pub fn c_formula_matrix(mom: &MomentSet) -> [[f64; 2]; 2] {
    let (m2, m3, m4, m6) = (mom.m2, mom.m3, mom.m4, mom.m6);
    let off = 2.0 * m4 * m2;
    [
        [m6 - m3 * m3, off],
        [off, 2.0 * (m4 * m2 + m3 * m3 + m2 * m2 * m2)],
    ]
}

/// Polynomial in three independent copies of `X`, keyed by exponents.
#[derive(Debug, Clone, Default)]
struct TriPoly(BTreeMap<[u32; 3], f64>);

impl TriPoly {
    fn term(exps: [u32; 3], c: f64) -> Self {
        let mut p = Self::default();
        p.0.insert(exps, c);
        p
    }

    fn add_assign(&mut self, other: &TriPoly) {
        for (e, c) in &other.0 {
            *self.0.entry(*e).or_insert(0.0) += c;
        }
    }

    fn mul(&self, other: &TriPoly) -> TriPoly {
        let mut out = TriPoly::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *out.0.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out
    }

    fn expectation(&self, mom: &MomentSet) -> Result<f64> {
        let mut total = 0.0;
        for (e, c) in &self.0 {
            total += c * mom.get(e[0])? * mom.get(e[1])? * mom.get(e[2])?;
        }
        Ok(total)
    }
}

/// Covariance of `(W_1, W_2)` by expanding the products over independent
/// `X_1, X_2, X_3`, where
/// `W_1 = (X_1^3 + X_2^3 + X_3^3) / sqrt 3` and
/// `W_2 = sum_{i != j} X_i X_j^2 / sqrt 3`.
///
/// This does not use [`c_formula_matrix`]; the two must agree.
pub fn w_vector_covariance(mom: &MomentSet) -> Result<[[f64; 2]; 2]> {
    let mut w1 = TriPoly::default();
    let mut w2 = TriPoly::default();
    for i in 0..3 {
        let mut e = [0; 3];
        e[i] = 3;
        w1.add_assign(&TriPoly::term(e, 1.0));
        for j in 0..3 {
            if i != j {
                let mut e = [0; 3];
                e[i] = 1;
                e[j] = 2;
                w2.add_assign(&TriPoly::term(e, 1.0));
            }
        }
    }
    let ws = [w1, w2];
    let means = [ws[0].expectation(mom)?, ws[1].expectation(mom)?];
    let mut cov = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            // The 1/sqrt(3) factors contribute 1/3 to every product.
            cov[a][b] = (ws[a].mul(&ws[b]).expectation(mom)? - means[a] * means[b]) / 3.0;
        }
    }
    Ok(cov)
}

/// Which part of the decomposition governs the fluctuations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    Q,
    E,
    Qperp,
    /// Zero `Q` part but nonzero even and `Q^perp` parts; reported on the
    /// even ladder without a joint limit theorem behind it.
    #[serde(rename = "mixed")]
    Mixed,
}

impl Sector {
    pub fn critical_alpha(self) -> f64 {
        match self {
            Sector::Q => 0.5,
            Sector::E | Sector::Mixed => 0.25,
            Sector::Qperp => 1.0 / 6.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Q => "Q",
            Sector::E => "E",
            Sector::Qperp => "Qperp",
            Sector::Mixed => "mixed",
        }
    }
}

/// Predicted regime for a polynomial statistic at decay exponent `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimePrediction {
    pub sector: Sector,
    pub alpha: f64,
    pub critical_alpha: f64,
    /// `t` such that the normalization is `g_t(N)`: `2 alpha`, `4 alpha` or `6 alpha`.
    pub rate_exponent: f64,
    pub sigma_sq: f64,
    pub supercritical: bool,
    /// Set for the mixed sector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl RegimePrediction {
    /// `g_t(N)^2`, or `None` above the critical exponent.
    pub fn normalization(&self, n: u64) -> Result<Option<f64>> {
        if self.supercritical {
            return Ok(None);
        }
        g_norm_sq(self.rate_exponent, n as f64).map(Some)
    }
}

pub fn predict(p: &Polynomial, alpha: f64, mom: &MomentSet) -> Result<RegimePrediction> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if p.is_constant() {
        return Err(Error::domain("polynomial must be nonconstant"));
    }
    check_degree(p.degree().unwrap_or(0))?;
    let d = decompose(p)?;
    let scale = p.norm();
    let has_q = d.q_part.norm() > SECTOR_TOL * scale;
    let has_even = !d.even_part.is_constant();
    let has_perp = d.qperp_part.norm() > SECTOR_TOL * scale;

    let (sector, sigma_sq, caveat) = if has_q {
        (Sector::Q, sigma_q(p, mom)?, None)
    } else if has_even && has_perp {
        (
            Sector::Mixed,
            sigma_e(&d.even_part, mom)?,
            Some("no joint limit theorem for combined E and Q-perp components; even-sector ladder reported".to_string()),
        )
    } else if has_even {
        (Sector::E, sigma_e(&d.even_part, mom)?, None)
    } else {
        (Sector::Qperp, sigma_qperp(&d.qperp_part, mom)?, None)
    };
    let critical_alpha = sector.critical_alpha();
    Ok(RegimePrediction {
        sector,
        alpha,
        critical_alpha,
        rate_exponent: alpha / critical_alpha,
        sigma_sq,
        // The critical exponent itself belongs to the Gaussian regime.
        supercritical: alpha > critical_alpha,
        caveat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Distribution;
    use crate::paths::count_paths_bruteforce;
    use crate::polyspace::perp_basis;

    fn rad() -> MomentSet {
        Distribution::rademacher(1.0).unwrap().moments()
    }

    fn unif() -> MomentSet {
        Distribution::uniform(1.0).unwrap().moments()
    }

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    const QUINTIC: [f64; 6] = [0.0, 18.0, 0.0, -4.0, 0.0, 0.2];

    #[test]
    fn g_norm_examples() {
        assert!((g_norm_sq(1.0, std::f64::consts::E.powi(2)).unwrap() - 2.0).abs() < 1e-15);
        assert!((g_norm_sq(0.5, 100.0).unwrap() - 20.0).abs() < 1e-12);
        assert!(g_norm_sq(0.0, 10.0).is_err());
        assert!(g_norm_sq(1.5, 10.0).is_err());
        assert!(g_norm_sq(0.5, 0.0).is_err());
    }

    #[test]
    fn g_norm_tracks_partial_sums() {
        let ratio = |n: u64| {
            let s: f64 = (1..=n).map(|i| (i as f64).powf(-0.5)).sum();
            g_norm_sq(0.5, n as f64).unwrap() / s
        };
        let (a, b, c) = (ratio(100), ratio(10_000), ratio(1_000_000));
        assert!((a - 1.0).abs() > (b - 1.0).abs() && (b - 1.0).abs() > (c - 1.0).abs());
        assert!((c - 1.0).abs() < 1e-3);
    }

    #[test]
    fn sigma_q_examples() {
        assert_eq!(sigma_q(&poly(&[0.0, 1.0]), &rad()).unwrap(), 1.0);
        assert_eq!(sigma_q(&perp_basis(3).unwrap()[0], &unif()).unwrap(), 0.0);
        assert_eq!(sigma_q(&poly(&[0.0, 0.0, 0.0, 1.0]), &rad()).unwrap(), 36.0);
    }

    #[test]
    fn cov_even_examples() {
        assert_eq!(cov_even(2, 2, &rad()).unwrap(), 0.0);
        assert!((cov_even(2, 2, &unif()).unwrap() - 4.0 / 45.0).abs() < 1e-15);
        assert_eq!(cov_even(4, 4, &rad()).unwrap(), 16.0);
        assert!(cov_even(3, 4, &rad()).is_err());
        assert!(cov_even(0, 2, &rad()).is_err());
        assert!(cov_even(18, 2, &rad()).is_err());
        assert_eq!(
            cov_even(4, 6, &unif()).unwrap(),
            cov_even(6, 4, &unif()).unwrap()
        );
    }

    #[test]
    fn cov_even_truncation_is_exact() {
        // No two-flat profile survives past the truncation point.
        for k in (2..=12).step_by(2) {
            for s in ((k - 2) / 2 + 1)..(k as i64 + 2) as usize {
                let b = MultiIndex::from_pairs([(0, 1), (s as i64, 1)]);
                assert_eq!(count_paths_bruteforce(k, &b).unwrap(), 0);
            }
        }
    }

    #[test]
    fn q_terms_examples() {
        assert_eq!(
            q_terms(3, 3).unwrap(),
            QTerms {
                q6: 1,
                q33: 0,
                q42: 0,
                q222: 0
            }
        );
        let a = q_terms(3, 5).unwrap();
        assert_eq!(
            a.q6,
            count_paths_bruteforce(5, &MultiIndex::from_pairs([(0, 3)])).unwrap()
        );
        assert_eq!(a, q_terms(5, 3).unwrap());
        assert_eq!(
            a,
            QTerms {
                q6: 10,
                q33: 0,
                q42: 10,
                q222: 0
            }
        );
        assert_eq!(
            q_terms(5, 5).unwrap(),
            QTerms {
                q6: 100,
                q33: 50,
                q42: 250,
                q222: 50
            }
        );
        assert!(q_terms(2, 3).is_err());
        assert!(q_terms(1, 3).is_err());
    }

    #[test]
    fn m_entry_examples() {
        for mom in [rad(), unif()] {
            assert_eq!(m_entry(3, 3, &mom).unwrap(), mom.m6 - mom.m3 * mom.m3);
        }
        assert_eq!(m_entry(3, 3, &rad()).unwrap(), 1.0);
        assert!((m_entry(3, 3, &unif()).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert_eq!(
            m_entry(5, 7, &unif()).unwrap(),
            m_entry(7, 5, &unif()).unwrap()
        );
    }

    #[test]
    fn sigma_qperp_examples() {
        let p3 = &perp_basis(3).unwrap()[0];
        assert_eq!(sigma_qperp(p3, &rad()).unwrap(), 1.0);
        assert!(sigma_qperp(&poly(&QUINTIC), &rad()).unwrap() < 1e-12);
        assert!(sigma_qperp(&poly(&QUINTIC), &unif()).unwrap() > 1e-3);
        assert!(sigma_qperp(&poly(&[0.0, 1.0]), &rad()).is_err());
        assert!(sigma_qperp(&poly(&[1.0, -6.0, 0.0, 1.0]), &rad()).is_err());
    }

    #[test]
    fn c_matrix_matches_m_entries() {
        // f = P_3, g = P_5 / 5 - 2 P_3.
        for mom in [rad(), unif()] {
            let m33 = m_entry(3, 3, &mom).unwrap();
            let m35 = m_entry(3, 5, &mom).unwrap();
            let m55 = m_entry(5, 5, &mom).unwrap();
            let from_m = [
                [m33, m35 / 5.0 - 2.0 * m33],
                [m35 / 5.0 - 2.0 * m33, m55 / 25.0 - 0.8 * m35 + 4.0 * m33],
            ];
            let c = c_formula_matrix(&mom);
            for a in 0..2 {
                for b in 0..2 {
                    assert!((from_m[a][b] - c[a][b]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn w_covariance_examples() {
        assert_eq!(
            w_vector_covariance(&rad()).unwrap(),
            [[1.0, 2.0], [2.0, 4.0]]
        );
        let w = w_vector_covariance(&unif()).unwrap();
        let expect = [
            [1.0 / 7.0, 2.0 / 15.0],
            [2.0 / 15.0, 2.0 * (1.0 / 15.0 + 1.0 / 27.0)],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!((w[a][b] - expect[a][b]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn skewed_law_exercises_third_moment() {
        let mom = Distribution::atoms(vec![-1.0, 2.0], vec![2.0 / 3.0, 1.0 / 3.0])
            .unwrap()
            .moments();
        assert!(mom.m3.abs() > 0.1);
        let w = w_vector_covariance(&mom).unwrap();
        let c = c_formula_matrix(&mom);
        for a in 0..2 {
            for b in 0..2 {
                assert!((w[a][b] - c[a][b]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn predict_examples() {
        let p = predict(&poly(&[0.0, 1.0]), 0.25, &rad()).unwrap();
        assert_eq!(p.sector, Sector::Q);
        assert_eq!(p.critical_alpha, 0.5);
        assert_eq!(p.rate_exponent, 0.5);
        assert_eq!(p.sigma_sq, 1.0);
        assert!(!p.supercritical);

        let p = predict(&poly(&[0.0, 0.0, 1.0]), 0.3, &unif()).unwrap();
        assert_eq!(p.sector, Sector::E);
        assert_eq!(p.critical_alpha, 0.25);
        assert!(p.supercritical);

        let p = predict(&perp_basis(3).unwrap()[0], 1.0 / 6.0, &rad()).unwrap();
        assert_eq!(p.sector, Sector::Qperp);
        assert!((p.rate_exponent - 1.0).abs() < 1e-15);
        assert_eq!(p.sigma_sq, 1.0);
        assert!(!p.supercritical);

        let p = predict(&poly(&QUINTIC), 0.1, &rad()).unwrap();
        assert_eq!(p.sector, Sector::Qperp);
        assert!(p.sigma_sq < 1e-12);
    }

    #[test]
    fn predict_mixed_and_errors() {
        // x^2 + P_3 has no Q component but both other parts.
        let p = predict(&poly(&[0.0, -6.0, 1.0, 1.0]), 0.2, &unif()).unwrap();
        assert_eq!(p.sector, Sector::Mixed);
        assert!(p.caveat.is_some());
        assert!((p.sigma_sq - 4.0 / 45.0).abs() < 1e-15);
        assert!(predict(&poly(&[3.0]), 0.2, &unif()).is_err());
        assert!(predict(&poly(&[0.0, 1.0]), 0.0, &unif()).is_err());
        assert!(predict(&Polynomial::monomial(17, 1.0), 0.1, &unif()).is_err());
    }

    #[test]
    fn prediction_serializes_sector_names() {
        let p = predict(&poly(&[0.0, 1.0]), 0.25, &rad()).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["sector"], "Q");
        let p = predict(&poly(&[0.0, -6.0, 1.0, 1.0]), 0.2, &unif()).unwrap();
        assert_eq!(serde_json::to_value(&p).unwrap()["sector"], "mixed");
    }
}
