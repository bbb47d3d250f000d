//! Invariant suites shared by the command line and the test targets.

use std::fmt;

use serde::Serialize;

use crate::census::{impossible_quadruples, pattern_census};
use crate::classifier::{
    classify_quad, classify_triple, partition_claims, verify_partition, Lemma, QuadOutcome, TripleOutcome,
    TripleRule,
};
use crate::core_map::{fill_iterates, r_k, syracuse_step, OddInt, MAX_R_K};
use crate::error::Result;
use crate::golden::{render, GOLDENS};
use crate::patterns::{pattern_of, tuple_pattern, PermPattern, TuplePattern};
use crate::sweep::sweep_odd;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Least failing input, when the check has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, counterexample: Option<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: counterexample.is_none(),
            counterexample,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)?;
        if let Some(c) = &self.counterexample {
            write!(f, " (counterexample {c})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const LEMMA_MAX_DEPTH: u32 = 8;
pub const LEMMA_MEMBERS: u64 = 1000;

/// First `members` elements of every leaf family for `k = 1..=max_depth`
/// have the family's triple pattern and classify into that family; every
/// `r_k` that fits maps to 1.
pub fn lemma_suite(max_depth: u32, members: u64) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for k in 1..=max_depth {
        for lemma in Lemma::ALL {
            let class = lemma.class(k)?;
            let mut bad = None;
            for x in 0..members {
                let m = class.residue() + u128::from(x) * class.modulus();
                let odd = OddInt::new(m)?;
                let observed = tuple_pattern(odd, 3)?;
                let ok = if lemma == Lemma::Two && x == 0 {
                    // The family's base point is r_k itself: (r_k, 1, 1).
                    observed == TuplePattern::Repeated { first: 1, second: 2 }
                        && classify_triple(odd)?.outcome == TripleOutcome::ReachesOne
                } else {
                    let predicted = classify_triple(odd)?;
                    observed == TuplePattern::Distinct(lemma.pattern())
                        && predicted.rule == TripleRule::Family(lemma)
                        && predicted.k == Some(k)
                };
                if !ok {
                    bad = Some(m.to_string());
                    break;
                }
            }
            checks.push(CheckOutcome::new(
                format!("{lemma} k={k}"),
                bad,
                format!("{members} members of {class} give {}", lemma.pattern()),
            ));
        }
    }
    let mut bad = None;
    for k in 1..=MAX_R_K {
        let r = r_k(k)?;
        if syracuse_step(r)? != (OddInt::ONE, 2 * k + 2) {
            bad = Some(r.to_string());
            break;
        }
    }
    checks.push(CheckOutcome::new(
        "R0 maps to 1",
        bad,
        format!("S(r_k) = 1 for k = 1..={MAX_R_K}"),
    ));
    Ok(SuiteReport {
        suite: "lemmas".into(),
        checks,
    })
}

/// Every partition claim, checked on `[1, max(bound, largest modulus)]`.
pub fn partition_suite(bound: u128) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for claim in partition_claims(LEMMA_MAX_DEPTH)? {
        let b = bound.max(claim.largest_modulus());
        let r = verify_partition(claim.parent, &claim.children, b)?;
        let children: Vec<String> = claim.children.iter().map(ToString::to_string).collect();
        checks.push(CheckOutcome::new(
            claim.name.clone(),
            r.counterexample.map(|m| m.to_string()),
            format!("{} = {} on [1, {b}]", claim.parent, children.join(" + ")),
        ));
    }
    Ok(SuiteReport {
        suite: "partitions".into(),
        checks,
    })
}

/// Tallies from comparing predictions against observed patterns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassifierTally {
    pub visited: u64,
    pub triple_mismatch: Option<u128>,
    pub reaches_one: u64,
    pub quad_checked: u64,
    /// Covered start values whose quadruple repeats; skipped by the comparison.
    pub quad_repeats: u64,
    pub quad_mismatch: Option<u128>,
    pub out_of_domain: u64,
    pub domain_mismatch: Option<u128>,
    pub forbidden: Option<u128>,
}

fn min_opt(a: Option<u128>, b: Option<u128>) -> Option<u128> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl ClassifierTally {
    fn merge(self, o: ClassifierTally) -> ClassifierTally {
        ClassifierTally {
            visited: self.visited + o.visited,
            triple_mismatch: min_opt(self.triple_mismatch, o.triple_mismatch),
            reaches_one: self.reaches_one + o.reaches_one,
            quad_checked: self.quad_checked + o.quad_checked,
            quad_repeats: self.quad_repeats + o.quad_repeats,
            quad_mismatch: min_opt(self.quad_mismatch, o.quad_mismatch),
            out_of_domain: self.out_of_domain + o.out_of_domain,
            domain_mismatch: min_opt(self.domain_mismatch, o.domain_mismatch),
            forbidden: min_opt(self.forbidden, o.forbidden),
        }
    }

    fn flag(slot: &mut Option<u128>, m: u128) {
        *slot = min_opt(*slot, Some(m));
    }

    fn record(&mut self, m: u128, forbidden: &[PermPattern; 4]) -> Result<()> {
        let odd = OddInt::new(m)?;
        let mut it = [0u128; 4];
        fill_iterates(m, &mut it)?;
        let observed3 = pattern_of(&it[..3]).ok();
        let observed4 = pattern_of(&it).ok();
        self.visited += 1;

        let triple = classify_triple(odd)?;
        let triple_ok = match triple.outcome {
            TripleOutcome::Pattern(p) => observed3 == Some(p),
            TripleOutcome::ReachesOne => {
                self.reaches_one += 1;
                observed3.is_none()
            }
            TripleOutcome::Unit => m == 1 && observed3.is_none(),
        };
        if !triple_ok {
            Self::flag(&mut self.triple_mismatch, m);
        }

        let quad = classify_quad(odd)?;
        let covered = matches!(m % 8, 7) || matches!(m % 16, 9 | 11);
        match quad.outcome {
            QuadOutcome::Pattern(p) => {
                if !covered {
                    Self::flag(&mut self.domain_mismatch, m);
                }
                match observed4 {
                    Some(o) => {
                        self.quad_checked += 1;
                        if o != p {
                            Self::flag(&mut self.quad_mismatch, m);
                        }
                    }
                    None => self.quad_repeats += 1,
                }
            }
            QuadOutcome::OutOfRuleDomain => {
                self.out_of_domain += 1;
                if covered {
                    Self::flag(&mut self.domain_mismatch, m);
                }
            }
            QuadOutcome::ReachesOne | QuadOutcome::Unit => {
                if observed4.is_some() {
                    Self::flag(&mut self.quad_mismatch, m);
                }
            }
        }

        if let Some(o) = observed4 {
            if forbidden.contains(&o) {
                Self::flag(&mut self.forbidden, m);
            }
        }
        Ok(())
    }
}

/// Compares both classifiers with directly computed patterns for every odd `m <= max`.
pub fn classifier_tally(max: u64, workers: usize) -> Result<ClassifierTally> {
    let forbidden = impossible_quadruples();
    sweep_odd(
        1,
        max,
        workers,
        ClassifierTally::default,
        |acc, m| acc.record(m, &forbidden),
        ClassifierTally::merge,
    )
}

pub fn classifier_suite(max: u64, workers: usize) -> Result<SuiteReport> {
    let t = classifier_tally(max, workers)?;
    let show = |o: Option<u128>| o.map(|m| m.to_string());
    let checks = vec![
        CheckOutcome::new(
            "triple oracle equivalence",
            show(t.triple_mismatch),
            format!("{} odd m <= {max}, {} in R0", t.visited, t.reaches_one),
        ),
        CheckOutcome::new(
            "quadruple oracle equivalence",
            show(t.quad_mismatch),
            format!("{} covered m compared, {} with repeats skipped", t.quad_checked, t.quad_repeats),
        ),
        CheckOutcome::new(
            "quadruple rule domain",
            show(t.domain_mismatch),
            format!("{} m outside 7 (mod 8), 11 (mod 16), 9 (mod 16)", t.out_of_domain),
        ),
        CheckOutcome::new(
            "impossible quadruples",
            show(t.forbidden),
            "no odd m has pattern 1,3,4,2 or 1,4,2,3 or 1,4,3,2 or 2,1,4,3".to_string(),
        ),
    ];
    Ok(SuiteReport {
        suite: "classifier".into(),
        checks,
    })
}

/// Recomputes every golden census with each worker count and compares bytes.
pub fn golden_suite(workers: &[usize]) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for g in GOLDENS {
        let mut bad = None;
        for &w in workers {
            let census = pattern_census(g.max, g.n, w)?;
            if render(&census) != g.json {
                bad = Some(format!("workers={w}"));
                break;
            }
        }
        checks.push(CheckOutcome::new(
            format!("golden n={} M={}", g.n, g.max),
            bad,
            format!("byte-identical for workers {workers:?}"),
        ));
    }
    Ok(SuiteReport {
        suite: "goldens".into(),
        checks,
    })
}
