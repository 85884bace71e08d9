//! Fluctuations of polynomial linear statistics `Tr P(H)` for the discrete
//! Schrödinger operator `H` on `[1, N]` with unit off-diagonals and random
//! decaying potential `V(n) = X_n / n^alpha`.
//!
//! - [`paths`]: closed lattice paths and the counts `p^k(beta)`
//! - [`polyspace`]: polynomials and the `Q_m (+) Q_m^perp (+) E_m` split
//! - [`moments`]: admissible potential laws, moments, random streams
//! - [`predictor`]: limiting variances for each sector
//! - [`simulator`]: trace evaluation, exact oracles, Monte Carlo runs
//! - [`cli`]: the `specfluct` command line front end

pub mod cli;
pub mod error;
pub mod moments;
pub mod paths;
pub mod polyspace;
pub mod predictor;
pub mod simulator;

pub use error::{Error, Result};
pub use moments::{Distribution, MomentSet, RandomStream};
pub use paths::{LatticePath, MultiIndex};
pub use polyspace::{Polynomial, SubspaceDecomposition};
pub use predictor::{RegimePrediction, Sector};
