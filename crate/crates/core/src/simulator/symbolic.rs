//! Exact expansion of `Tr H^k` as an integer polynomial in `V(1), ..., V(N)`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::paths::MultiIndex;

pub const SYMBOLIC_MAX_N: usize = 24;
pub const SYMBOLIC_MAX_K: usize = 10;

/// Exponent vector over sites `1..=N` (stored 0-based).
type Monomial = Vec<u8>;
type SparsePoly = HashMap<Monomial, i128>;

fn accumulate(into: &mut SparsePoly, from: &SparsePoly, bump: Option<usize>) {
    for (mono, &c) in from {
        let key = match bump {
            Some(site) => {
                let mut m = mono.clone();
                m[site] += 1;
                m
            }
            None => mono.clone(),
        };
        *into.entry(key).or_insert(0) += c;
    }
}

/// Coefficients of `Tr H^k` keyed by absolute site (`MultiIndex` level `n`
/// means `V(n)`, 1-based). Zero coefficients are omitted.
pub fn expand_trace_symbolic(n: usize, k: usize) -> Result<BTreeMap<MultiIndex, i128>> {
    if n == 0 {
        return Err(Error::domain("matrix size must be at least 1"));
    }
    if n > SYMBOLIC_MAX_N {
        return Err(Error::Capacity {
            what: "symbolic matrix size",
            requested: n,
            limit: SYMBOLIC_MAX_N,
        });
    }
    if k > SYMBOLIC_MAX_K {
        return Err(Error::Capacity {
            what: "symbolic power",
            requested: k,
            limit: SYMBOLIC_MAX_K,
        });
    }

    let mut total: SparsePoly = HashMap::new();
    for start in 0..n {
        // Column `start` of H^j, propagated one power at a time.
        let mut col: Vec<SparsePoly> = vec![HashMap::new(); n];
        col[start].insert(vec![0u8; n], 1);
        for _ in 0..k {
            let mut next: Vec<SparsePoly> = vec![HashMap::new(); n];
            for r in 0..n {
                if r > 0 {
                    accumulate(&mut next[r], &col[r - 1], None);
                }
                accumulate(&mut next[r], &col[r], Some(r));
                if r + 1 < n {
                    accumulate(&mut next[r], &col[r + 1], None);
                }
            }
            col = next;
        }
        accumulate(&mut total, &col[start], None);
    }

    Ok(total
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(mono, c)| {
            let beta = MultiIndex::from_pairs(
                mono.iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(site, &e)| (site as i64 + 1, u32::from(e))),
            );
            (beta, c)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{binomial, count_paths_bruteforce};

    #[test]
    fn cube_linear_coefficient() {
        let map = expand_trace_symbolic(10, 3).unwrap();
        for i in 3..=7 {
            assert_eq!(map[&MultiIndex::delta(i)], 6);
        }
    }

    #[test]
    fn interior_square_times_neighbour() {
        let beta = MultiIndex::from_pairs([(0, 2), (1, 1)]);
        let map = expand_trace_symbolic(16, 7).unwrap();
        let want = count_paths_bruteforce(7, &beta).unwrap() as i128;
        assert!(want > 0);
        assert_eq!(map[&beta.shifted(8)], want);
    }

    #[test]
    fn constant_term_counts_interior_sites() {
        let (n, k) = (12usize, 6usize);
        let map = expand_trace_symbolic(n, k).unwrap();
        // Walks from site i of length k stay inside iff i in [k/2 + 1, N - k/2].
        let interior = (n - k) as i128;
        let c = binomial(k as u64, (k / 2) as u64).unwrap() as i128;
        assert!(map[&MultiIndex::zero()] >= interior * c);
        assert!(map[&MultiIndex::zero()] < n as i128 * c);
    }

    #[test]
    fn square_is_exact() {
        let map = expand_trace_symbolic(5, 2).unwrap();
        assert_eq!(map[&MultiIndex::zero()], 8);
        for i in 1..=5 {
            assert_eq!(map[&MultiIndex::from_pairs([(i, 2)])], 1);
        }
        assert_eq!(map.len(), 6);
    }

    #[test]
    fn caps() {
        assert!(expand_trace_symbolic(25, 2).is_err());
        assert!(expand_trace_symbolic(4, 11).is_err());
        assert!(expand_trace_symbolic(0, 1).is_err());
    }
}
