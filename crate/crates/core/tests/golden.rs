mod common;

use syracuse_core::census::pattern_census;
use syracuse_core::golden::{render, GOLDENS};

#[test]
fn committed_goldens_match_independent_oracle() {
    for g in GOLDENS {
        let oracle = common::census(g.max, g.n);
        assert_eq!(common::render(&oracle), g.json, "n={} M={}", g.n, g.max);
    }
}

#[test]
fn sweep_reproduces_goldens_at_any_worker_count() {
    for g in GOLDENS {
        for workers in [1, 2, 4, 7] {
            let census = pattern_census(g.max, g.n, workers).unwrap();
            assert_eq!(render(&census), g.json, "n={} M={} workers={workers}", g.n, g.max);
        }
    }
}

#[test]
fn oracle_agrees_beyond_goldens() {
    for (max, n) in [(99_999, 5), (30_001, 8), (1, 1), (2, 3)] {
        let census = pattern_census(max, n, 3).unwrap();
        assert_eq!(render(&census), common::render(&common::census(max, n)), "n={n} M={max}");
    }
}
