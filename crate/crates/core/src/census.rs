//! Exhaustive pattern counts, empirical densities, feasibility reports and
//! dropping-time statistics.
//!
//! Ratios divide by the exact number of odd integers in `[1, M]`, that is
//! `ceil(M / 2)`, so that pattern counts plus repeats sum to the denominator.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::core_map::{syracuse_raw, OddInt};
use crate::error::{Error, Result};
use crate::patterns::{factorial, tuple_pattern_raw, PermPattern, TuplePattern, MAX_PATTERN_LEN};
use crate::sweep::{odd_count, sweep_odd};

/// Formats a ratio with 12 significant digits.
pub fn format_ratio(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.11}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PATTERN_LEN {
        Err(Error::InvalidArgument(format!("tuple length {n} outside 1..={MAX_PATTERN_LEN}")))
    } else {
        Ok(())
    }
}

/// Additive pattern tallies over some set of odd start values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCounts {
    n: usize,
    /// Indexed by pattern rank.
    by_rank: Vec<u64>,
    repeated: u64,
    visited: u64,
}

impl PatternCounts {
    pub fn empty(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(Self::zeros(n))
    }

    fn zeros(n: usize) -> Self {
        PatternCounts {
            n,
            by_rank: vec![0; factorial(n)],
            repeated: 0,
            visited: 0,
        }
    }

    #[inline]
    fn record(&mut self, m: u128) -> Result<()> {
        match tuple_pattern_raw(m, self.n)? {
            TuplePattern::Distinct(p) => self.by_rank[p.rank()] += 1,
            TuplePattern::Repeated { .. } => self.repeated += 1,
        }
        self.visited += 1;
        Ok(())
    }

    pub fn merge(mut self, other: PatternCounts) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::PatternLengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        for (a, b) in self.by_rank.iter_mut().zip(&other.by_rank) {
            *a += b;
        }
        self.repeated += other.repeated;
        self.visited += other.visited;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, pattern: &PermPattern) -> u64 {
        if pattern.len() == self.n {
            self.by_rank[pattern.rank()]
        } else {
            0
        }
    }

    pub fn repeated(&self) -> u64 {
        self.repeated
    }

    /// Number of start values tallied.
    pub fn visited(&self) -> u64 {
        self.visited
    }

    /// Nonzero counts keyed by pattern.
    pub fn nonzero(&self) -> BTreeMap<PermPattern, u64> {
        self.by_rank
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (PermPattern::from_rank(self.n, r).expect("rank in range"), c))
            .collect()
    }
}

/// Tallies the `n`-tuple patterns of every odd `m` in `[lo, hi]`.
pub fn count_patterns(lo: u64, hi: u64, n: usize, workers: usize) -> Result<PatternCounts> {
    check_len(n)?;
    sweep_odd(
        lo,
        hi,
        workers,
        || PatternCounts::zeros(n),
        |acc, m| acc.record(m),
        |a, b| a.merge(b).expect("same tuple length"),
    )
}

/// `Gamma_sigma(M)` for every pattern of length `n`, over odd `m <= M`.
///
/// Serialises as `{n, M, denominator, repeated, counts}` with only the
/// nonzero counts listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternCensus {
    pub n: usize,
    #[serde(rename = "M")]
    pub max: u64,
    pub denominator: u64,
    pub repeated: u64,
    pub counts: BTreeMap<PermPattern, u64>,
}

impl PatternCensus {
    /// Builds the census for `[1, max]` from tallies that must cover exactly those odd integers.
    pub fn from_counts(max: u64, counts: &PatternCounts) -> Result<Self> {
        let denominator = odd_count(max);
        if counts.visited() != denominator {
            return Err(Error::InvalidArgument(format!(
                "tallies cover {} start values, [1, {max}] has {denominator} odd integers",
                counts.visited()
            )));
        }
        Ok(PatternCensus {
            n: counts.n(),
            max,
            denominator,
            repeated: counts.repeated(),
            counts: counts.nonzero(),
        })
    }

    pub fn count(&self, pattern: &PermPattern) -> u64 {
        self.counts.get(pattern).copied().unwrap_or(0)
    }

    pub fn ratio(&self, pattern: &PermPattern) -> f64 {
        self.count(pattern) as f64 / self.denominator as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census serialises")
    }
}

pub fn pattern_census(max: u64, n: usize, workers: usize) -> Result<PatternCensus> {
    if max == 0 {
        return Err(Error::InvalidArgument("census bound must be at least 1".into()));
    }
    let counts = count_patterns(1, max, n, workers)?;
    PatternCensus::from_counts(max, &counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Density {
    pub count: u64,
    pub denominator: u64,
    pub ratio: f64,
}

pub fn density_estimate(census: &PatternCensus, pattern: &PermPattern) -> Result<Density> {
    if pattern.len() != census.n {
        return Err(Error::PatternLengthMismatch {
            expected: census.n,
            found: pattern.len(),
        });
    }
    Ok(Density {
        count: census.count(pattern),
        denominator: census.denominator,
        ratio: census.ratio(pattern),
    })
}

/// The four quadruple patterns no start value produces.
pub fn impossible_quadruples() -> [PermPattern; 4] {
    [[1, 3, 4, 2], [1, 4, 2, 3], [1, 4, 3, 2], [2, 1, 4, 3]]
        .map(|e| PermPattern::new(&e).expect("static pattern"))
}

/// Patterns of length `n` known never to occur: the impossible quadruples,
/// lifted by appending the next value until they reach length `n`.
pub fn proved_impossible(n: usize) -> Result<BTreeSet<PermPattern>> {
    check_len(n)?;
    let mut set: BTreeSet<PermPattern> = BTreeSet::new();
    if n < 4 {
        return Ok(set);
    }
    for mut p in impossible_quadruples() {
        while p.len() < n {
            p = p.lift()?;
        }
        set.insert(p);
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub n: usize,
    #[serde(rename = "M")]
    pub max: u64,
    pub observed: BTreeSet<PermPattern>,
    pub unobserved: BTreeSet<PermPattern>,
    pub proved_impossible: BTreeSet<PermPattern>,
}

impl FeasibilityReport {
    /// Every proved-impossible pattern went unobserved.
    pub fn consistent(&self) -> bool {
        self.proved_impossible.is_subset(&self.unobserved)
    }
}

pub fn feasibility_report(max: u64, n: usize, workers: usize) -> Result<FeasibilityReport> {
    let census = pattern_census(max, n, workers)?;
    let observed: BTreeSet<PermPattern> = census.counts.keys().copied().collect();
    let unobserved = PermPattern::all(n)?
        .into_iter()
        .filter(|p| !observed.contains(p))
        .collect();
    Ok(FeasibilityReport {
        n,
        max,
        observed,
        unobserved,
        proved_impossible: proved_impossible(n)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropTime {
    Dropped(u32),
    /// No drop within the cap; says nothing about finiteness.
    ExceedsCap,
}

pub const DEFAULT_DROP_CAP: u32 = 256;

/// Least `k <= cap` with `S^k(m) < m`.
pub fn dropping_time(m: OddInt, cap: u32) -> Result<DropTime> {
    if m.get() <= 1 {
        return Err(Error::InvalidArgument("dropping time is defined for odd m > 1".into()));
    }
    if cap == 0 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    Ok(drop_raw(m.get(), cap)?)
}

#[inline]
fn drop_raw(m: u128, cap: u32) -> Result<DropTime> {
    let mut x = m;
    for k in 1..=cap {
        x = syracuse_raw(x).map_err(|_| Error::Overflow { m })?.0;
        if x < m {
            return Ok(DropTime::Dropped(k));
        }
    }
    Ok(DropTime::ExceedsCap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DroppingStats {
    pub x: u64,
    pub k_max: u32,
    /// `k -> #{odd 1 < m <= x : D(m) = k}` for every `1 <= k <= k_max`.
    pub counts_by_dropping_time: BTreeMap<u32, u64>,
    /// Start values with `D(m) > k_max`.
    pub undecided: u64,
}

impl DroppingStats {
    /// `N_k(x)`: odd `1 < m <= x` with `D(m) <= k`.
    pub fn n_k(&self, k: u32) -> u64 {
        self.counts_by_dropping_time.range(..=k).map(|(_, c)| c).sum()
    }

    /// `N_k(x) / ceil(x / 2)`.
    pub fn ratio(&self, k: u32) -> f64 {
        self.n_k(k) as f64 / odd_count(self.x) as f64
    }
}

pub fn dropping_census(x: u64, k_max: u32, workers: usize) -> Result<DroppingStats> {
    if x < 3 {
        return Err(Error::InvalidArgument("dropping census needs x >= 3".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    // Slot 0 holds the undecided count.
    let slots = k_max as usize + 1;
    let tallies = sweep_odd(
        3,
        x,
        workers,
        || vec![0u64; slots],
        |acc, m| {
            match drop_raw(m, k_max)? {
                DropTime::Dropped(k) => acc[k as usize] += 1,
                DropTime::ExceedsCap => acc[0] += 1,
            }
            Ok(())
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    )?;
    Ok(DroppingStats {
        x,
        k_max,
        counts_by_dropping_time: (1..=k_max).map(|k| (k, tallies[k as usize])).collect(),
        undecided: tallies[0],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalRow {
    pub triple: PermPattern,
    pub quad: PermPattern,
    pub count: u64,
    pub ratio: f64,
    /// Whether the quadruple rules cover this triple pattern.
    pub covered: bool,
}

/// Triple patterns whose quadruple extensions the classifier predicts.
pub fn covered_triples() -> [PermPattern; 3] {
    [[1, 2, 3], [1, 3, 2], [2, 1, 3]].map(|e| PermPattern::new(&e).expect("static pattern"))
}

/// Distribution of quadruple patterns within each triple pattern, over odd
/// `m <= max` with distinct quadruple coordinates. Every pattern of length 4
/// appears once, grouped under its length-3 prefix; zero counts included.
pub fn conditional_quad_densities(max: u64, workers: usize) -> Result<Vec<ConditionalRow>> {
    let census = pattern_census(max, 4, workers)?;
    let covered = covered_triples();
    let mut rows: Vec<ConditionalRow> = PermPattern::all(4)?
        .into_iter()
        .map(|quad| {
            let triple = quad.prefix(3)?;
            Ok(ConditionalRow {
                triple,
                quad,
                count: census.count(&quad),
                ratio: census.ratio(&quad),
                covered: covered.contains(&triple),
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| (r.triple, r.quad));
    Ok(rows)
}
