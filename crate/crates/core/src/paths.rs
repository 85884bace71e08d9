//! Closed lattice paths and their flat-step profiles.
//!
//! A path of length `k` is a sequence of levels `(y_0, ..., y_k)` where each
//! step moves up, down, or stays flat. Expanding `Tr(H^k)` for the
//! tridiagonal operator `H = S + V + S*` produces one monomial per closed
//! path, the potential factors coming from the flat steps. The number of
//! closed paths whose flat profile is a shift of `beta` is written
//! `p^k(beta)` throughout the crate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the path length accepted by the enumerators.
pub const DEFAULT_K_MAX: usize = 16;

/// Hard cap for the memoized profile tables shared by the predictor.
pub const TABLE_K_MAX: usize = 24;

/// A finitely supported map `level -> multiplicity`.
///
/// Zero multiplicities are never stored, so two indices are equal iff they
/// describe the same function.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: BTreeMap<i64, u32>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `delta` shifted to `level`.
    pub fn delta(level: i64) -> Self {
        let mut b = Self::zero();
        b.increment(level, 1);
        b
    }

    /// Builds an index from `(level, multiplicity)` pairs, summing repeats.
    pub fn from_pairs<I: IntoIterator<Item = (i64, u32)>>(pairs: I) -> Self {
        let mut b = Self::zero();
        for (h, m) in pairs {
            b.increment(h, m);
        }
        b
    }

    pub fn increment(&mut self, level: i64, multiplicity: u32) {
        if multiplicity > 0 {
            *self.entries.entry(level).or_insert(0) += multiplicity;
        }
    }

    pub fn get(&self, level: i64) -> u32 {
        self.entries.get(&level).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total degree `|beta|`.
    pub fn order(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Lowest supported level; `None` for the zero index.
    pub fn lowest_level(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn highest_level(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    /// `beta^i`, i.e. the index with `beta^i_h = beta_{h-i}`.
    pub fn shifted(&self, by: i64) -> Self {
        Self {
            entries: self.entries.iter().map(|(&h, &m)| (h + by, m)).collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.lowest_level().is_none_or(|l| l == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.entries.iter().map(|(&h, &m)| (h, m))
    }
}

impl std::ops::Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        let mut out = self.clone();
        for (h, m) in rhs.iter() {
            out.increment(h, m);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (h, m)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}:{m}")?;
        }
        f.write_str("}")
    }
}

/// Parses `"0:1,1:1"`. Braces are optional; an empty body or `none` gives the
/// zero index.
impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        if body.is_empty() || body.eq_ignore_ascii_case("none") {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for part in body.split(',') {
            let (h, m) = part.split_once(':').ok_or_else(|| {
                Error::Parse(format!("expected level:multiplicity, got {part:?}"))
            })?;
            let h: i64 = h
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad level {h:?}")))?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity {m:?}")))?;
            if m == 0 {
                return Err(Error::Parse(format!(
                    "multiplicity at level {h} must be positive"
                )));
            }
            out.increment(h, m);
        }
        Ok(out)
    }
}

/// A sequence of levels with unit-or-zero increments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    levels: Vec<i64>,
}

impl LatticePath {
    pub fn new(levels: Vec<i64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("a path needs at least one level"));
        }
        if let Some(w) = levels.windows(2).find(|w| (w[1] - w[0]).abs() > 1) {
            return Err(Error::domain(format!(
                "step {} -> {} is not a unit step",
                w[0], w[1]
            )));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_closed(&self) -> bool {
        self.levels[0] == 0 && *self.levels.last().unwrap() == 0
    }
}

/// Flat steps per level. The result is left at the path's own levels.
pub fn flat_profile(path: &LatticePath) -> MultiIndex {
    MultiIndex::from_pairs(
        path.levels
            .windows(2)
            .filter(|w| w[0] == w[1])
            .map(|w| (w[0], 1)),
    )
}

/// Shifts `beta` so its lowest level is 0.
pub fn canonicalize(beta: &MultiIndex) -> MultiIndex {
    match beta.lowest_level() {
        None => MultiIndex::zero(),
        Some(l) => beta.shifted(-l),
    }
}

fn check_k(k: usize, k_max: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("path length must be positive"));
    }
    if k > k_max {
        return Err(Error::Capacity {
            what: "path length",
            requested: k,
            limit: k_max,
        });
    }
    Ok(())
}

/// Depth-first walk over closed paths of a fixed length.
///
/// The visitor sees the flat counts per level (offset by `k`) together with
/// the extreme levels reached; branches that cannot return to 0 are cut.
struct ClosedWalk<'a, F> {
    k: usize,
    max_flats: u32,
    max_per_level: u32,
    flats: Vec<u32>,
    total_flats: u32,
    visit: &'a mut F,
}

impl<F> ClosedWalk<'_, F>
where
    F: FnMut(&[u32], i64, i64),
{
    fn run(&mut self, t: usize, y: i64, lo: i64, hi: i64) {
        let remaining = (self.k - t) as i64;
        if remaining == 0 {
            (self.visit)(&self.flats, lo, hi);
            return;
        }
        // The remaining steps must bring us back; every surplus step beyond
        // |y| is either flat or half of an up/down pair.
        let r = remaining - 1;
        for dy in [-1i64, 0, 1] {
            let ny = y + dy;
            if ny.abs() > r {
                continue;
            }
            if dy == 0 {
                let idx = (y + self.k as i64) as usize;
                if self.total_flats == self.max_flats || self.flats[idx] == self.max_per_level {
                    continue;
                }
                self.flats[idx] += 1;
                self.total_flats += 1;
                self.run(t + 1, ny, lo, hi);
                self.flats[idx] -= 1;
                self.total_flats -= 1;
            } else {
                self.run(t + 1, ny, lo.min(ny), hi.max(ny));
            }
        }
    }
}

fn walk_closed<F: FnMut(&[u32], i64, i64)>(
    k: usize,
    max_flats: u32,
    max_per_level: u32,
    visit: &mut F,
) {
    let mut walk = ClosedWalk {
        k,
        max_flats,
        max_per_level,
        flats: vec![0; 2 * k + 1],
        total_flats: 0,
        visit,
    };
    walk.run(0, 0, 0, 0);
}

fn canonical_from_counts(counts: &[u32]) -> MultiIndex {
    let first = counts.iter().position(|&c| c > 0);
    match first {
        None => MultiIndex::zero(),
        Some(f) => MultiIndex::from_pairs(
            counts[f..]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(h, &c)| (h as i64, c)),
        ),
    }
}

/// Path-count routines with a configurable length cap.
#[derive(Debug, Clone, Copy)]
pub struct PathCounter {
    pub k_max: usize,
}

impl Default for PathCounter {
    fn default() -> Self {
        Self {
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl PathCounter {
    pub fn new(k_max: usize) -> Self {
        Self { k_max }
    }

    /// `p^k(beta)` by exhaustive enumeration of closed paths.
    pub fn count_bruteforce(&self, k: usize, beta: &MultiIndex) -> Result<u128> {
        check_k(k, self.k_max)?;
        let target = canonicalize(beta);
        let order = target.order();
        if order as usize > k || (k - order as usize) % 2 == 1 {
            return Ok(0);
        }
        let span = target.highest_level().unwrap_or(0);
        let mut count: u128 = 0;
        let mut visit = |flats: &[u32], _lo: i64, _hi: i64| {
            let total: u32 = flats.iter().sum();
            if total != order {
                return;
            }
            if order == 0 {
                count += 1;
                return;
            }
            let first = flats.iter().position(|&c| c > 0).unwrap();
            let last = flats.iter().rposition(|&c| c > 0).unwrap();
            if (last - first) as i64 != span {
                return;
            }
            if target.iter().all(|(h, m)| flats[first + h as usize] == m)
                && target.iter().count() == flats.iter().filter(|&&c| c > 0).count()
            {
                count += 1;
            }
        };
        walk_closed(k, order, target.max_multiplicity(), &mut visit);
        Ok(count)
    }

    /// Every canonical `beta` with `|beta| = order` and `p^k(beta) > 0`.
    pub fn all_profiles(&self, k: usize, order: u32) -> Result<BTreeMap<MultiIndex, u128>> {
        check_k(k, self.k_max)?;
        let mut out = BTreeMap::new();
        let mut visit = |flats: &[u32], _lo: i64, _hi: i64| {
            if flats.iter().sum::<u32>() == order {
                *out.entry(canonical_from_counts(flats)).or_insert(0u128) += 1;
            }
        };
        walk_closed(k, order, order, &mut visit);
        Ok(out)
    }

    /// Closed-form `p^k(beta)` for `beta` in `{0, delta, 2 delta, delta + delta^j}`.
    ///
    /// Returns `Ok(None)` for indices without a known closed form.
    pub fn count_closed(&self, k: usize, beta: &MultiIndex) -> Result<Option<u128>> {
        if k == 0 {
            return Err(Error::domain("path length must be positive"));
        }
        let beta = canonicalize(beta);
        let shape: Vec<(i64, u32)> = beta.iter().collect();
        let even = k.is_multiple_of(2);
        let value = match shape.as_slice() {
            [] => {
                if even {
                    binomial(k as u64, k as u64 / 2)?
                } else {
                    0
                }
            }
            [(0, 1)] => {
                if even {
                    0
                } else {
                    odd_delta(k as u64)?
                }
            }
            [(0, 2)] => {
                if even {
                    double_delta(k as u64)?
                } else {
                    0
                }
            }
            [(0, 1), (j, 1)] => {
                if even {
                    delta_pair(k as u64, *j as u64)?
                } else {
                    0
                }
            }
            _ => return Ok(None),
        };
        Ok(Some(value))
    }

    /// `sum_{j >= 0} p^k(delta + delta^j)` for even `k`.
    pub fn two_flat_total(&self, k: usize) -> Result<u128> {
        check_k(k, self.k_max)?;
        if k % 2 == 1 {
            return Err(Error::domain(format!(
                "two_flat_total needs even k, got {k}"
            )));
        }
        let k = k as u128;
        let pairs = k.checked_mul(k - 1).ok_or(Error::Overflow("binom(k,2)"))? / 2;
        let centre = binomial((k - 2) as u64, (k as u64 - 2) / 2)?;
        pairs
            .checked_mul(centre)
            .ok_or(Error::Overflow("two_flat_total"))
    }
}

pub fn count_paths_bruteforce(k: usize, beta: &MultiIndex) -> Result<u128> {
    PathCounter::default().count_bruteforce(k, beta)
}

pub fn count_paths_closed(k: usize, beta: &MultiIndex) -> Result<Option<u128>> {
    PathCounter::default().count_closed(k, beta)
}

pub fn two_flat_total(k: usize) -> Result<u128> {
    PathCounter::default().two_flat_total(k)
}

pub fn all_profiles(k: usize, order: u32) -> Result<BTreeMap<MultiIndex, u128>> {
    PathCounter::default().all_profiles(k, order)
}

/// `binom(n, r)` in checked 128-bit arithmetic.
pub fn binomial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(n - i).ok_or(Error::Overflow("binomial"))? / (i + 1);
    }
    Ok(acc)
}

fn factorial(n: u64) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| {
        acc.checked_mul(i).ok_or(Error::Overflow("factorial"))
    })
}

/// `k! / (((k-1)/2)!)^2` for odd `k`.
pub(crate) fn odd_delta(k: u64) -> Result<u128> {
    let half = factorial((k - 1) / 2)?;
    let denom = half
        .checked_mul(half)
        .ok_or(Error::Overflow("p^k(delta)"))?;
    Ok(factorial(k)? / denom)
}

/// `k * 2^(k-3)` for even `k`; `k = 2` gives 1.
fn double_delta(k: u64) -> Result<u128> {
    if k < 2 {
        return Ok(0);
    }
    let k = k as u128;
    if k == 2 {
        return Ok(1);
    }
    let pow = 1u128
        .checked_shl((k - 3) as u32)
        .filter(|_| k - 3 < 127)
        .ok_or(Error::Overflow("p^k(2 delta)"))?;
    k.checked_mul(pow).ok_or(Error::Overflow("p^k(2 delta)"))
}

/// Triple binomial sum for `p^k(delta + delta^j)`, `k` even, `j >= 1`.
///
/// The offset `i` ranges over negative values too; the bounds come from
/// requiring `m, m+i, l, l+j, m+l, m+l+i+j` to lie in `[0, k/2 - 1]`.
fn delta_pair(k: u64, j: u64) -> Result<u128> {
    if j == 0 {
        return double_delta(k);
    }
    let h = (k / 2) as i64 - 1;
    let j = j as i64;
    let k = k as i64;
    let mut sum: u128 = 0;
    for m in 0..=h {
        for i in -m..=h {
            for l in 0..=h {
                let in_range = |v: i64| (0..=h).contains(&v);
                if !(in_range(m + i)
                    && in_range(l + j)
                    && in_range(m + l)
                    && in_range(m + l + i + j))
                {
                    continue;
                }
                let a = binomial((2 * m + i) as u64, m as u64)?;
                let b = binomial((2 * l + j) as u64, l as u64)?;
                let c = binomial((k - 2 - 2 * m - i - 2 * l - j) as u64, (h - m - l) as u64)?;
                let term = a
                    .checked_mul(b)
                    .and_then(|x| x.checked_mul(c))
                    .ok_or(Error::Overflow("p^k(delta + delta^j)"))?;
                sum = sum
                    .checked_add(term)
                    .ok_or(Error::Overflow("p^k(delta + delta^j)"))?;
            }
        }
    }
    sum.checked_mul(2)
        .ok_or(Error::Overflow("p^k(delta + delta^j)"))
}

/// All canonical profiles of closed length-`k` paths with their counts.
///
/// Tables are built once per `k` and shared read-only afterwards.
pub fn profile_table(k: usize) -> Result<&'static HashMap<MultiIndex, u128>> {
    static TABLES: [OnceLock<HashMap<MultiIndex, u128>>; TABLE_K_MAX + 1] =
        [const { OnceLock::new() }; TABLE_K_MAX + 1];
    check_k(k, TABLE_K_MAX)?;
    Ok(TABLES[k].get_or_init(|| {
        let mut table = HashMap::new();
        let mut visit = |flats: &[u32], _lo: i64, _hi: i64| {
            *table.entry(canonical_from_counts(flats)).or_insert(0u128) += 1;
        };
        walk_closed(k, k as u32, k as u32, &mut visit);
        table
    }))
}

/// Memoized `p^k(beta)`; `k = 0` counts the empty path for `beta = 0`.
pub fn path_count(k: usize, beta: &MultiIndex) -> Result<u128> {
    if k == 0 {
        return Ok(u128::from(beta.is_zero()));
    }
    Ok(profile_table(k)?
        .get(&canonicalize(beta))
        .copied()
        .unwrap_or(0))
}

/// A closed path summarized by its flat profile and the levels it visits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathShape {
    /// Flat counts at the path's own levels (not canonicalized).
    pub profile: MultiIndex,
    pub min_level: i64,
    pub max_level: i64,
}

/// Groups every closed length-`k` path by `(profile, min, max)`.
pub fn closed_path_shapes(k: usize, k_max: usize) -> Result<HashMap<PathShape, u128>> {
    if k == 0 {
        let mut out = HashMap::new();
        out.insert(
            PathShape {
                profile: MultiIndex::zero(),
                min_level: 0,
                max_level: 0,
            },
            1,
        );
        return Ok(out);
    }
    check_k(k, k_max)?;
    let offset = k as i64;
    let mut out = HashMap::new();
    let mut visit = |flats: &[u32], lo: i64, hi: i64| {
        let profile = MultiIndex::from_pairs(
            flats
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i as i64 - offset, c)),
        );
        *out.entry(PathShape {
            profile,
            min_level: lo,
            max_level: hi,
        })
        .or_insert(0u128) += 1;
    };
    walk_closed(k, k as u32, k as u32, &mut visit);
    Ok(out)
}
