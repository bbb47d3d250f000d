//! Committed census golden files, produced by the brute-force generator in
//! `golden/generate.py`.

use crate::census::PatternCensus;

#[derive(Debug, Clone, Copy)]
pub struct Golden {
    pub max: u64,
    pub n: usize,
    pub json: &'static str,
}

macro_rules! golden {
    ($n:literal, $max:literal) => {
        Golden {
            max: $max,
            n: $n,
            json: include_str!(concat!("../golden/census_n", $n, "_M", $max, ".json")),
        }
    };
}

pub const GOLDENS: [Golden; 9] = [
    golden!(2, 100),
    golden!(3, 100),
    golden!(4, 100),
    golden!(2, 1000),
    golden!(3, 1000),
    golden!(4, 1000),
    golden!(2, 10000),
    golden!(3, 10000),
    golden!(4, 10000),
];

/// The exact bytes a golden file holds for `census`.
pub fn render(census: &PatternCensus) -> String {
    let mut s = census.to_json();
    s.push('\n');
    s
}
