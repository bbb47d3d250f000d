//! Brute-force oracle: repeated halving for the map, sorting for ranks, and a
//! hand-written JSON renderer. Shares nothing with the library's sweep path.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub fn syracuse(m: u64) -> u64 {
    let mut x = 3 * m + 1;
    while x % 2 == 0 {
        x /= 2;
    }
    x
}

pub fn iterates(m: u64, n: usize) -> Vec<u64> {
    let mut t = vec![m];
    while t.len() < n {
        t.push(syracuse(*t.last().unwrap()));
    }
    t
}

/// Ranks by sorting; `None` when coordinates repeat.
pub fn ranks(t: &[u64]) -> Option<Vec<usize>> {
    let mut sorted = t.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t.len() {
        return None;
    }
    Some(t.iter().map(|v| sorted.binary_search(v).unwrap() + 1).collect())
}

pub struct OracleCensus {
    pub n: usize,
    pub max: u64,
    pub repeated: u64,
    pub counts: BTreeMap<Vec<usize>, u64>,
}

pub fn census(max: u64, n: usize) -> OracleCensus {
    let mut counts = BTreeMap::new();
    let mut repeated = 0;
    for m in (1..=max).step_by(2) {
        match ranks(&iterates(m, n)) {
            Some(r) => *counts.entry(r).or_insert(0) += 1,
            None => repeated += 1,
        }
    }
    OracleCensus { n, max, repeated, counts }
}

pub fn render(c: &OracleCensus) -> String {
    let mut s = format!(
        "{{\n  \"n\": {},\n  \"M\": {},\n  \"denominator\": {},\n  \"repeated\": {},\n  \"counts\": ",
        c.n,
        c.max,
        (c.max + 1) / 2,
        c.repeated
    );
    if c.counts.is_empty() {
        s.push_str("{}");
    } else {
        s.push_str("{\n");
        let rows: Vec<String> = c
            .counts
            .iter()
            .map(|(k, v)| {
                let key: Vec<String> = k.iter().map(|x| x.to_string()).collect();
                format!("    \"{}\": {}", key.join(","), v)
            })
            .collect();
        s.push_str(&rows.join(",\n"));
        s.push_str("\n  }");
    }
    s.push_str("\n}\n");
    s
}
