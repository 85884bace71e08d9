//! Admissible potential laws: bounded, mean zero, positive variance.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ATOM_TOL: f64 = 1e-12;

/// Law of the i.i.d. variables `X_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionSpec", into = "DistributionSpec")]
pub enum Distribution {
    /// `+c` or `-c` with probability 1/2 each.
    Rademacher { c: f64 },
    /// Uniform on `[-c, c]`.
    UniformSymmetric { c: f64 },
    /// Finitely many atoms.
    DiscreteAtoms {
        values: Vec<f64>,
        probabilities: Vec<f64>,
    },
}

/// Wire form of [`Distribution`] in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistributionSpec {
    Rademacher {
        c: f64,
    },
    #[serde(alias = "uniform_symmetric")]
    Uniform {
        c: f64,
    },
    #[serde(alias = "discrete_atoms")]
    Atoms {
        values: Vec<f64>,
        probabilities: Vec<f64>,
    },
}

impl TryFrom<DistributionSpec> for Distribution {
    type Error = Error;

    fn try_from(spec: DistributionSpec) -> Result<Self> {
        match spec {
            DistributionSpec::Rademacher { c } => Distribution::rademacher(c),
            DistributionSpec::Uniform { c } => Distribution::uniform(c),
            DistributionSpec::Atoms {
                values,
                probabilities,
            } => Distribution::atoms(values, probabilities),
        }
    }
}

impl From<Distribution> for DistributionSpec {
    fn from(d: Distribution) -> Self {
        match d {
            Distribution::Rademacher { c } => DistributionSpec::Rademacher { c },
            Distribution::UniformSymmetric { c } => DistributionSpec::Uniform { c },
            Distribution::DiscreteAtoms {
                values,
                probabilities,
            } => DistributionSpec::Atoms {
                values,
                probabilities,
            },
        }
    }
}

fn check_scale(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "scale must be finite and positive, got {c}"
        )));
    }
    Ok(())
}

impl Distribution {
    pub fn rademacher(c: f64) -> Result<Self> {
        check_scale(c)?;
        Ok(Self::Rademacher { c })
    }

    pub fn uniform(c: f64) -> Result<Self> {
        check_scale(c)?;
        Ok(Self::UniformSymmetric { c })
    }

    /// Atoms must have finite values, nonnegative weights summing to 1, mean
    /// zero and positive variance (tolerance 1e-12).
    pub fn atoms(values: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDistribution(msg));
        if values.is_empty() || values.len() != probabilities.len() {
            return bad(format!(
                "need matching nonempty value/probability lists, got {} and {}",
                values.len(),
                probabilities.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return bad("atom values must be finite".into());
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return bad("probabilities must be finite and nonnegative".into());
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > ATOM_TOL {
            return bad(format!("probabilities sum to {total}, not 1"));
        }
        let mean: f64 = values.iter().zip(&probabilities).map(|(v, p)| v * p).sum();
        if mean.abs() > ATOM_TOL {
            return bad(format!("mean is {mean}, not 0"));
        }
        let var: f64 = values
            .iter()
            .zip(&probabilities)
            .map(|(v, p)| v * v * p)
            .sum();
        if var <= 0.0 {
            return bad("variance must be positive".into());
        }
        Ok(Self::DiscreteAtoms {
            values,
            probabilities,
        })
    }

    /// Exact `E[X^j]` for `j` in `1..=6`.
    pub fn moment(&self, j: u32) -> Result<f64> {
        if !(1..=6).contains(&j) {
            return Err(Error::domain(format!(
                "moment order must be in 1..=6, got {j}"
            )));
        }
        Ok(self.raw_moment(j))
    }

    pub(crate) fn raw_moment(&self, j: u32) -> f64 {
        match self {
            Self::Rademacher { c } => {
                if j.is_multiple_of(2) {
                    c.powi(j as i32)
                } else {
                    0.0
                }
            }
            Self::UniformSymmetric { c } => {
                if j.is_multiple_of(2) {
                    c.powi(j as i32) / f64::from(j + 1)
                } else {
                    0.0
                }
            }
            Self::DiscreteAtoms {
                values,
                probabilities,
            } => values
                .iter()
                .zip(probabilities)
                .map(|(v, p)| p * v.powi(j as i32))
                .sum(),
        }
    }

    pub fn moments(&self) -> MomentSet {
        MomentSet {
            m1: self.raw_moment(1),
            m2: self.raw_moment(2),
            m3: self.raw_moment(3),
            m4: self.raw_moment(4),
            m5: self.raw_moment(5),
            m6: self.raw_moment(6),
        }
    }

    /// Bound `C` with `|X| <= C` almost surely.
    pub fn support_bound(&self) -> f64 {
        match self {
            Self::Rademacher { c } | Self::UniformSymmetric { c } => *c,
            Self::DiscreteAtoms { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// One variate drawn from `rng`.
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        match self {
            Self::Rademacher { c } => {
                if rng.inner.random::<bool>() {
                    *c
                } else {
                    -*c
                }
            }
            Self::UniformSymmetric { c } => c * (2.0 * rng.inner.random::<f64>() - 1.0),
            Self::DiscreteAtoms {
                values,
                probabilities,
            } => {
                let u: f64 = rng.inner.random();
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probabilities) {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                // u landed in the rounding gap above the last cumulative weight.
                let last = probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0);
                values[last]
            }
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rademacher { c } => write!(f, "rademacher:{c}"),
            Self::UniformSymmetric { c } => write!(f, "uniform:{c}"),
            Self::DiscreteAtoms {
                values,
                probabilities,
            } => {
                f.write_str("atoms:")?;
                for (i, (v, p)) in values.iter().zip(probabilities).enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}@{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `rademacher:C`, `uniform:C`, or `atoms:v1@p1,v2@p2,...`.
impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected kind:params, got {s:?}")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "rademacher" => Distribution::rademacher(num(rest)?),
            "uniform" | "uniform_symmetric" => Distribution::uniform(num(rest)?),
            "atoms" | "discrete_atoms" => {
                let mut values = Vec::new();
                let mut probabilities = Vec::new();
                for atom in rest.split(',') {
                    let (v, p) = atom.split_once('@').ok_or_else(|| {
                        Error::Parse(format!("expected value@probability, got {atom:?}"))
                    })?;
                    values.push(num(v)?);
                    probabilities.push(num(p)?);
                }
                Distribution::atoms(values, probabilities)
            }
            other => Err(Error::Parse(format!("unknown distribution {other:?}"))),
        }
    }
}

/// `E[X^j]` for `j = 1..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub m5: f64,
    pub m6: f64,
}

impl MomentSet {
    /// `E[X^j]`, with `E[X^0] = 1`.
    pub fn get(&self, j: u32) -> Result<f64> {
        Ok(match j {
            0 => 1.0,
            1 => self.m1,
            2 => self.m2,
            3 => self.m3,
            4 => self.m4,
            5 => self.m5,
            6 => self.m6,
            _ => {
                return Err(Error::domain(format!(
                    "moment order must be in 0..=6, got {j}"
                )))
            }
        })
    }

    /// `eta^2 = Var(X)`.
    pub fn eta_sq(&self) -> f64 {
        self.m2
    }

    /// `Var(X^2) = E[X^4] - E[X^2]^2`.
    pub fn var_of_square(&self) -> f64 {
        self.m4 - self.m2 * self.m2
    }
}

/// A reproducible random stream addressed by `(master seed, stream id)`.
///
/// Backed by ChaCha20 with the stream id in the cipher's stream counter, so
/// distinct ids are independent and a stream never depends on how many
/// other streams exist.
#[derive(Debug, Clone)]
pub struct RandomStream {
    inner: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_id);
        Self { inner }
    }

    /// Stream addressed by a tuple of coordinates, e.g. `(size, replicate)`.
    pub fn substream(master_seed: u64, coords: &[u64]) -> Self {
        Self::new(master_seed, stream_key(coords))
    }

    pub fn next_f64(&mut self) -> f64 {
        self.inner.random()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit hash of stream coordinates.
pub fn stream_key(coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(0x6a09_e667_f3bc_c909, |h, &c| splitmix64(h ^ splitmix64(c)))
}
