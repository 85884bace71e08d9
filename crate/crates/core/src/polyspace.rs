//! Real polynomials with the coefficient inner product, and the splitting of
//! `V_m` into the line spanned by `Q_m`, its orthocomplement among odd
//! polynomials, and the even polynomials.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::paths::odd_delta;

/// Coefficients `a_0, ..., a_m` with `m` odd.
///
/// Inputs of even length are padded with a trailing zero so that the stored
/// length is always even (`m + 1` with `m` odd).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        if coeffs.len() % 2 == 1 {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    /// The monomial `c x^k`.
    pub fn monomial(k: usize, c: f64) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// The odd bound `m` of the space `V_m` this polynomial lives in.
    pub fn padded_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// Copy padded with zeros up to odd bound `m` (never truncates).
    pub fn padded_to(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < m + 1 {
            coeffs.resize(m + 1, 0.0);
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, by: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * by).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Keeps only even powers.
    pub fn even_part(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c } else { 0.0 })
                .collect(),
        )
    }

    /// Keeps only odd powers.
    pub fn odd_part(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 1 { c } else { 0.0 })
                .collect(),
        )
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        inner_product(self, self).sqrt()
    }
}

impl TryFrom<Vec<f64>> for Polynomial {
    type Error = Error;

    fn try_from(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Parse(format!("non-finite coefficient {c}")));
        }
        Ok(Self::new(coeffs))
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

/// Parses a comma separated coefficient list `"a0,a1,..."`.
impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::try_from(coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1.0 => f.write_str("x")?,
                1 => write!(f, "{a}x")?,
                _ if a == 1.0 => write!(f, "x^{k}")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `sum_k a_k b_k`, the shorter vector zero padded.
pub fn inner_product(p: &Polynomial, r: &Polynomial) -> f64 {
    p.coeffs.iter().zip(&r.coeffs).map(|(a, b)| a * b).sum()
}

fn check_odd(m: usize, least: usize) -> Result<()> {
    if m.is_multiple_of(2) || m < least {
        return Err(Error::domain(format!("expected odd m >= {least}, got {m}")));
    }
    Ok(())
}

/// `Q_m(x) = sum_j (2j+1)!/(j!)^2 x^(2j+1)`, i.e. the odd coefficients are `p^j(delta)`.
pub fn q_polynomial(m: usize) -> Result<Polynomial> {
    check_odd(m, 1)?;
    let mut coeffs = vec![0.0; m + 1];
    for j in (1..=m).step_by(2) {
        coeffs[j] = odd_delta(j as u64)? as f64;
    }
    Ok(Polynomial::new(coeffs))
}

/// `[P_3, P_5, ..., P_m]` with `P_k = x^k - p^k(delta) x`.
pub fn perp_basis(m: usize) -> Result<Vec<Polynomial>> {
    check_odd(m, 3)?;
    (3..=m)
        .step_by(2)
        .map(|k| {
            let mut coeffs = vec![0.0; k + 1];
            coeffs[k] = 1.0;
            coeffs[1] = -(odd_delta(k as u64)? as f64);
            Ok(Polynomial::new(coeffs))
        })
        .collect()
}

/// Components of a polynomial in `Q_m (+) Q_m^perp (+) E_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceDecomposition {
    /// The odd bound the input was padded to.
    pub m: usize,
    pub q_part: Polynomial,
    pub qperp_part: Polynomial,
    pub even_part: Polynomial,
}

impl SubspaceDecomposition {
    pub fn reconstruct(&self) -> Polynomial {
        self.q_part.add(&self.qperp_part).add(&self.even_part)
    }
}

/// `<P, Q_m> / <Q_m, Q_m>` with `m` the padded degree of `P`.
pub fn q_coordinate(p: &Polynomial) -> Result<f64> {
    let q = q_polynomial(p.padded_degree())?;
    Ok(inner_product(p, &q) / inner_product(&q, &q))
}

pub fn decompose(p: &Polynomial) -> Result<SubspaceDecomposition> {
    let m = p.padded_degree();
    let q = q_polynomial(m)?;
    let c = inner_product(p, &q) / inner_product(&q, &q);
    let q_part = q.scale(c);
    let qperp_part = p.odd_part().sub(&q_part);
    Ok(SubspaceDecomposition {
        m,
        q_part: q_part.padded_to(m),
        qperp_part: qperp_part.padded_to(m),
        even_part: p.even_part().padded_to(m),
    })
}

pub fn evaluate(p: &Polynomial, x: f64) -> f64 {
    p.evaluate(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{count_paths_bruteforce, MultiIndex};

    fn poly(c: &[f64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    #[test]
    fn padding_to_odd_degree() {
        assert_eq!(poly(&[1.0, 0.0, 1.0]).padded_degree(), 3);
        assert_eq!(poly(&[1.0, 2.0]).padded_degree(), 1);
        assert_eq!(Polynomial::zero().padded_degree(), 1);
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(poly(&[0.0, 0.0, 3.0, 0.0]).degree(), Some(2));
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(
            inner_product(&poly(&[0.0, 1.0, 0.0, 2.0]), &poly(&[0.0, 3.0])),
            3.0
        );
        let q3 = q_polynomial(3).unwrap();
        let p3 = &perp_basis(3).unwrap()[0];
        assert_eq!(inner_product(p3, &q3), 0.0);
        assert_eq!(inner_product(&q3, &q3), 37.0);
    }

    #[test]
    fn q_polynomial_examples() {
        assert_eq!(q_polynomial(3).unwrap().coeffs(), &[0.0, 1.0, 0.0, 6.0]);
        assert_eq!(
            q_polynomial(5).unwrap().coeffs(),
            &[0.0, 1.0, 0.0, 6.0, 0.0, 30.0]
        );
        assert_eq!(q_polynomial(1).unwrap().coeffs(), &[0.0, 1.0]);
        assert!(q_polynomial(4).is_err());
        assert!(q_polynomial(0).is_err());
    }

    #[test]
    fn q_coefficients_are_single_flat_counts() {
        let q = q_polynomial(13).unwrap();
        for j in (1..=13).step_by(2) {
            let n = count_paths_bruteforce(j, &MultiIndex::delta(0)).unwrap();
            assert_eq!(q.coeff(j), n as f64, "j={j}");
        }
    }

    #[test]
    fn perp_basis_examples() {
        assert_eq!(perp_basis(3).unwrap(), vec![poly(&[0.0, -6.0, 0.0, 1.0])]);
        let b5 = perp_basis(5).unwrap();
        assert_eq!(b5[1], poly(&[0.0, -30.0, 0.0, 0.0, 0.0, 1.0]));
        let b7 = perp_basis(7).unwrap();
        assert_eq!(b7.last().unwrap().coeff(1), -140.0);
        assert!(perp_basis(1).is_err());
        assert!(perp_basis(6).is_err());
    }

    #[test]
    fn decompose_cubic() {
        let d = decompose(&poly(&[0.0, 0.0, 0.0, 1.0])).unwrap();
        let q = [0.0, 1.0, 0.0, 6.0].map(|c| c * 6.0 / 37.0);
        let qp = [0.0, -6.0, 0.0, 1.0].map(|c| c / 37.0);
        for k in 0..4 {
            assert!((d.q_part.coeff(k) - q[k]).abs() < 1e-15);
            assert!((d.qperp_part.coeff(k) - qp[k]).abs() < 1e-15);
        }
        assert!(d.even_part.is_zero());
    }

    #[test]
    fn decompose_trivial_cases() {
        let d = decompose(&poly(&[1.0, 0.0, 1.0])).unwrap();
        assert!(d.q_part.is_zero() && d.qperp_part.is_zero());
        assert_eq!(d.even_part, poly(&[1.0, 0.0, 1.0, 0.0]));

        let q5 = q_polynomial(5).unwrap();
        let d = decompose(&q5).unwrap();
        assert_eq!(d.q_part, q5);
        assert!(d.qperp_part.is_zero());
        assert!(d.even_part.is_zero());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&poly(&[0.0, -6.0, 0.0, 1.0]), 2.0), -4.0);
        assert_eq!(evaluate(&q_polynomial(3).unwrap(), 0.0), 0.0);
        let quintic = poly(&[0.0, 18.0, 0.0, -4.0, 0.0, 0.2]);
        assert!((evaluate(&quintic, 1.0) - 14.2).abs() < 1e-14);
    }

    #[test]
    fn parse_coefficient_list() {
        let p: Polynomial = "0,18,0,-4,0,0.2".parse().unwrap();
        assert_eq!(p.degree(), Some(5));
        assert!("1,x".parse::<Polynomial>().is_err());
        assert!("1,NaN".parse::<Polynomial>().is_err());
        assert_eq!(poly(&[0.0, -6.0, 0.0, 1.0]).to_string(), "-6x + x^3");
    }
}
