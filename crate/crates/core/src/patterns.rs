//! Permutation patterns of iterate tuples and increasing-decreasing run patterns.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::core_map::{fill_iterates, syracuse_raw, OddInt};
use crate::error::{Error, Result};

/// Longest tuple the pattern machinery handles.
pub const MAX_PATTERN_LEN: usize = 8;

/// A permutation of `(1, ..., n)` in one-line notation, `n <= MAX_PATTERN_LEN`.
///
/// Ordering is lexicographic on the entries, so patterns of one length sort
/// the same way as their [`rank`](Self::rank).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermPattern {
    len: u8,
    entries: [u8; MAX_PATTERN_LEN],
}

impl PermPattern {
    pub fn new(entries: &[u8]) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n > MAX_PATTERN_LEN {
            return Err(Error::InvalidPattern(format!(
                "length {n} outside 1..={MAX_PATTERN_LEN}"
            )));
        }
        let mut seen = [false; MAX_PATTERN_LEN];
        for &v in entries {
            let v = v as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPattern(format!(
                    "{entries:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v - 1] = true;
        }
        let mut buf = [0u8; MAX_PATTERN_LEN];
        buf[..n].copy_from_slice(entries);
        Ok(PermPattern {
            len: n as u8,
            entries: buf,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let v: Vec<u8> = (1..=n as u8).collect();
        PermPattern::new(&v)
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Lexicographic rank among the `n!` permutations of length `n` (Lehmer code).
    pub fn rank(&self) -> usize {
        let e = self.entries();
        let n = e.len();
        let mut rank = 0;
        for i in 0..n {
            let smaller_after = e[i + 1..].iter().filter(|&&v| v < e[i]).count();
            rank = rank * (n - i) + smaller_after;
        }
        rank
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn from_rank(n: usize, mut rank: usize) -> Result<Self> {
        if n == 0 || n > MAX_PATTERN_LEN || rank >= factorial(n) {
            return Err(Error::InvalidArgument(format!("rank {rank} out of range for n = {n}")));
        }
        let mut digits = [0usize; MAX_PATTERN_LEN];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u8> = (1..=n as u8).collect();
        let entries: Vec<u8> = digits[..n].iter().map(|&d| pool.remove(d)).collect();
        PermPattern::new(&entries)
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> Result<Vec<PermPattern>> {
        if n == 0 || n > MAX_PATTERN_LEN {
            return Err(Error::InvalidArgument(format!("n = {n} outside 1..={MAX_PATTERN_LEN}")));
        }
        (0..factorial(n)).map(|r| PermPattern::from_rank(n, r)).collect()
    }

    /// `(a_1, ..., a_n) -> (a_1, ..., a_n, n + 1)`.
    pub fn lift(&self) -> Result<Self> {
        let mut v = self.entries().to_vec();
        v.push(self.len + 1);
        PermPattern::new(&v)
    }

    /// Pattern of the first `k` coordinates, re-ranked.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix length {k} outside 1..={}",
                self.len()
            )));
        }
        pattern_of(&self.entries()[..k])
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl Ord for PermPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries().cmp(other.entries())
    }
}

impl PartialOrd for PermPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Splits `"(1, 2, 3)"` or `"1,2,3"` into its trimmed fields.
fn split_tuple(s: &str) -> Result<Vec<&str>> {
    let t = s.trim();
    let t = match (t.strip_prefix('('), t.strip_suffix(')')) {
        (Some(_), Some(_)) => &t[1..t.len() - 1],
        (None, None) => t,
        _ => return Err(Error::InvalidPattern(format!("unbalanced parentheses in {s:?}"))),
    };
    let fields: Vec<&str> = t.split(',').map(str::trim).collect();
    if fields.iter().any(|f| f.is_empty()) {
        return Err(Error::InvalidPattern(format!("empty field in {s:?}")));
    }
    Ok(fields)
}

impl FromStr for PermPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = split_tuple(s)?
            .into_iter()
            .map(|f| {
                f.parse::<u8>()
                    .map_err(|_| Error::InvalidPattern(format!("bad entry {f:?} in {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        PermPattern::new(&entries)
    }
}

impl Serialize for PermPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PermPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Pattern of a tuple of pairwise distinct values: entry `i` is the
/// 1-based ascending rank of `tuple[i]`.
///
/// Equal coordinates yield [`Error::RepeatedCoordinate`] for the
/// lexicographically first equal pair.
pub fn pattern_of<T: Ord>(tuple: &[T]) -> Result<PermPattern> {
    let n = tuple.len();
    if n == 0 || n > MAX_PATTERN_LEN {
        return Err(Error::InvalidArgument(format!(
            "tuple length {n} outside 1..={MAX_PATTERN_LEN}"
        )));
    }
    let mut entries = [0u8; MAX_PATTERN_LEN];
    for i in 0..n {
        let mut rank = 1u8;
        for j in 0..n {
            match tuple[j].cmp(&tuple[i]) {
                Ordering::Less => rank += 1,
                Ordering::Equal if j != i => {
                    return Err(Error::RepeatedCoordinate {
                        first: j.min(i),
                        second: j.max(i),
                    })
                }
                _ => {}
            }
        }
        entries[i] = rank;
    }
    Ok(PermPattern {
        len: n as u8,
        entries,
    })
}

/// Outcome of extracting the pattern of `(m, S(m), ..., S^{n-1}(m))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TuplePattern {
    Distinct(PermPattern),
    /// `S^first(m) = S^second(m)` with `first < second`, the lexicographically first such pair.
    Repeated { first: usize, second: usize },
}

impl TuplePattern {
    pub fn pattern(&self) -> Option<PermPattern> {
        match self {
            TuplePattern::Distinct(p) => Some(*p),
            TuplePattern::Repeated { .. } => None,
        }
    }
}

/// Sweep-friendly form of [`tuple_pattern`]; `m` odd, `1 <= n <= MAX_PATTERN_LEN`.
#[inline]
pub(crate) fn tuple_pattern_raw(m: u128, n: usize) -> Result<TuplePattern> {
    let mut buf = [0u128; MAX_PATTERN_LEN];
    fill_iterates(m, &mut buf[..n])?;
    match pattern_of(&buf[..n]) {
        Ok(p) => Ok(TuplePattern::Distinct(p)),
        Err(Error::RepeatedCoordinate { first, second }) => {
            Ok(TuplePattern::Repeated { first, second })
        }
        Err(e) => Err(e),
    }
}

pub fn tuple_pattern(m: OddInt, n: usize) -> Result<TuplePattern> {
    if n == 0 || n > MAX_PATTERN_LEN {
        return Err(Error::InvalidArgument(format!(
            "tuple length {n} outside 1..={MAX_PATTERN_LEN}"
        )));
    }
    tuple_pattern_raw(m.get(), n)
}

/// Run lengths `(v_1, ..., v_k)`: `v_1` strict rises, then `v_2` strict
/// falls, alternating.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncDecPattern {
    runs: Vec<u32>,
}

impl IncDecPattern {
    pub fn new(runs: Vec<u32>) -> Result<Self> {
        if runs.is_empty() || runs.contains(&0) {
            return Err(Error::InvalidPattern(format!(
                "run lengths must be a nonempty list of positive integers, got {runs:?}"
            )));
        }
        Ok(IncDecPattern { runs })
    }

    pub fn runs(&self) -> &[u32] {
        &self.runs
    }

    /// Number of Syracuse steps the pattern spans.
    pub fn steps(&self) -> u64 {
        self.runs.iter().map(|&v| u64::from(v)).sum()
    }
}

impl FromStr for IncDecPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let runs = split_tuple(s)?
            .into_iter()
            .map(|f| {
                f.parse::<u32>()
                    .map_err(|_| Error::InvalidPattern(format!("bad run length {f:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        IncDecPattern::new(runs)
    }
}

impl fmt::Display for IncDecPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.runs.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn has_incdec_pattern(m: OddInt, pattern: &IncDecPattern) -> Result<bool> {
    let start = m.get();
    let mut x = start;
    for (i, &run) in pattern.runs().iter().enumerate() {
        let rising = i % 2 == 0;
        for _ in 0..run {
            let next = syracuse_raw(x).map_err(|_| Error::Overflow { m: start })?.0;
            let ok = if rising { x < next } else { x > next };
            if !ok {
                return Ok(false);
            }
            x = next;
        }
    }
    Ok(true)
}

/// Smallest odd `m <= bound` with the given increasing-decreasing pattern.
pub fn search_incdec(pattern: &IncDecPattern, bound: u128) -> Result<Option<OddInt>> {
    let mut m = 1u128;
    while m <= bound {
        let odd = OddInt::new(m)?;
        if has_incdec_pattern(odd, pattern)? {
            return Ok(Some(odd));
        }
        m = match m.checked_add(2) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PermPattern {
        s.parse().unwrap()
    }

    fn odd(v: u128) -> OddInt {
        OddInt::new(v).unwrap()
    }

    #[test]
    fn pattern_of_examples() {
        assert_eq!(pattern_of(&[7, 13, 18, 11]).unwrap(), p("1,3,4,2"));
        assert_eq!(pattern_of(&[1, 2, 3]).unwrap(), p("1,2,3"));
        assert_eq!(
            pattern_of(&[5, 1, 1]),
            Err(Error::RepeatedCoordinate { first: 1, second: 2 })
        );
        assert_eq!(pattern_of(&[29, 11, 17]).unwrap(), p("3,1,2"));
        assert_eq!(
            pattern_of(&[4, 9, 9, 4]),
            Err(Error::RepeatedCoordinate { first: 0, second: 3 })
        );
        assert!(pattern_of::<u32>(&[]).is_err());
    }

    #[test]
    fn tuple_pattern_examples() {
        assert_eq!(tuple_pattern(odd(7), 3).unwrap(), TuplePattern::Distinct(p("1,2,3")));
        assert_eq!(tuple_pattern(odd(9), 3).unwrap(), TuplePattern::Distinct(p("2,1,3")));
        assert_eq!(
            tuple_pattern(odd(5), 3).unwrap(),
            TuplePattern::Repeated { first: 1, second: 2 }
        );
        assert_eq!(tuple_pattern(odd(25), 4).unwrap(), TuplePattern::Distinct(p("3,2,4,1")));
        assert_eq!(
            tuple_pattern(odd(1), 4).unwrap(),
            TuplePattern::Repeated { first: 0, second: 1 }
        );
        assert_eq!(tuple_pattern(odd(1), 1).unwrap(), TuplePattern::Distinct(p("1")));
        assert!(tuple_pattern(odd(3), 9).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p(" ( 1, 3,4 ,2 ) ").to_string(), "1,3,4,2");
        assert_eq!(format!("{:?}", p("2,1")), "(2,1)");
        for bad in ["", "1,,2", "(1,2", "1,1", "0,1", "1,3", "a,b", "1,2,3,4,5,6,7,8,9"] {
            assert!(bad.parse::<PermPattern>().is_err(), "{bad:?} parsed");
        }
        let json = serde_json::to_string(&p("3,1,2")).unwrap();
        assert_eq!(json, "\"3,1,2\"");
        assert_eq!(serde_json::from_str::<PermPattern>(&json).unwrap(), p("3,1,2"));
    }

    #[test]
    fn rank_enumeration_is_lexicographic() {
        for n in 1..=6 {
            let all = PermPattern::all(n).unwrap();
            assert_eq!(all.len(), factorial(n));
            for (r, pat) in all.iter().enumerate() {
                assert_eq!(pat.rank(), r);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(PermPattern::from_rank(3, 0).unwrap(), p("1,2,3"));
        assert_eq!(PermPattern::from_rank(3, 5).unwrap(), p("3,2,1"));
        assert!(PermPattern::from_rank(3, 6).is_err());
    }

    #[test]
    fn lift_and_prefix() {
        assert_eq!(p("1,3,4,2").lift().unwrap(), p("1,3,4,2,5"));
        assert!(PermPattern::identity(8).unwrap().lift().is_err());
        assert_eq!(p("3,1,4,2").prefix(3).unwrap(), p("2,1,3"));
        assert_eq!(p("3,1,4,2").prefix(1).unwrap(), p("1"));
    }

    #[test]
    fn incdec_examples() {
        let v = |s: &str| s.parse::<IncDecPattern>().unwrap();
        assert!(has_incdec_pattern(odd(3), &v("1,1")).unwrap());
        assert!(has_incdec_pattern(odd(7), &v("2")).unwrap());
        assert!(!has_incdec_pattern(odd(9), &v("1")).unwrap());
        assert!("1,0".parse::<IncDecPattern>().is_err());
        assert!("".parse::<IncDecPattern>().is_err());
    }

    /// Direct transcription of the run conditions over a materialised trajectory.
    fn incdec_oracle(m: u128, runs: &[u32]) -> bool {
        let len = 1 + runs.iter().sum::<u32>() as usize;
        let mut t = vec![m];
        while t.len() < len {
            let mut x = 3 * t[t.len() - 1] + 1;
            while x % 2 == 0 {
                x /= 2;
            }
            t.push(x);
        }
        let mut pos = 0;
        for (i, &run) in runs.iter().enumerate() {
            for _ in 0..run {
                let ok = if i % 2 == 0 { t[pos] < t[pos + 1] } else { t[pos] > t[pos + 1] };
                if !ok {
                    return false;
                }
                pos += 1;
            }
        }
        true
    }

    fn search_oracle(runs: &[u32], bound: u128) -> Option<u128> {
        (1..=bound).step_by(2).find(|&m| incdec_oracle(m, runs))
    }

    #[test]
    fn search_incdec_matches_oracle() {
        // (runs, bound, frozen minimal witness)
        let cases: &[(&[u32], u128, Option<u128>)] = &[
            (&[1], 10, Some(3)),
            (&[2], 10, Some(7)),
            (&[10], 3, None),
            (&[10], 100_000, Some(2047)),
            (&[1, 1], 10, Some(3)),
            (&[5], 1000, Some(63)),
            (&[3, 2, 1], 10_000, Some(47)),
            (&[2, 2, 2], 100_000, Some(87)),
        ];
        for &(runs, bound, expected) in cases {
            assert_eq!(search_oracle(runs, bound), expected, "oracle {runs:?}");
            let v = IncDecPattern::new(runs.to_vec()).unwrap();
            let got = search_incdec(&v, bound).unwrap().map(OddInt::get);
            assert_eq!(got, expected, "search {runs:?}");
        }
    }

    #[test]
    fn pair_reduction() {
        for m in (3..=1_000_000u128).step_by(2) {
            let got = tuple_pattern(odd(m), 2).unwrap().pattern().unwrap();
            let expected = if m % 4 == 3 { "1,2" } else { "2,1" };
            assert_eq!(got, p(expected), "m = {m}");
        }
    }

    proptest! {
        #[test]
        fn ranks_sort_the_tuple(values in proptest::collection::hash_set(-1000i64..1000, 1..=8)) {
            let tuple: Vec<i64> = values.into_iter().collect();
            let sigma = pattern_of(&tuple).unwrap();
            let mut placed = vec![0i64; tuple.len()];
            for (i, &r) in sigma.entries().iter().enumerate() {
                placed[r as usize - 1] = tuple[i];
            }
            let mut sorted = tuple.clone();
            sorted.sort();
            prop_assert_eq!(placed, sorted.clone());
            let desc: Vec<i64> = sorted.iter().rev().copied().collect();
            let rev: Vec<u8> = (1..=tuple.len() as u8).rev().collect();
            prop_assert_eq!(pattern_of(&sorted).unwrap(), PermPattern::identity(tuple.len()).unwrap());
            prop_assert_eq!(pattern_of(&desc).unwrap(), PermPattern::new(&rev).unwrap());
        }

        #[test]
        fn rank_round_trips(n in 1usize..=8, seed in any::<usize>()) {
            let r = seed % factorial(n);
            prop_assert_eq!(PermPattern::from_rank(n, r).unwrap().rank(), r);
        }

        #[test]
        fn prefix_consistency(m in (0u128..5_000_000).prop_map(|x| 2 * x + 1), n in 2usize..=8) {
            if let TuplePattern::Distinct(full) = tuple_pattern(odd(m), n).unwrap() {
                let short = tuple_pattern(odd(m), n - 1).unwrap().pattern().unwrap();
                prop_assert_eq!(full.prefix(n - 1).unwrap(), short);
            }
        }
    }
}
