//! Syracuse-map permutation patterns.
//!
//! The Syracuse map sends an odd `m` to the odd part of `3m + 1`. This crate
//! extracts the permutation pattern of `(m, S(m), ..., S^{n-1}(m))`, predicts
//! triple and quadruple patterns from congruence classes, and measures
//! pattern and dropping-time densities by exhaustive parallel sweeps.

pub mod census;
pub mod classifier;
pub mod core_map;
pub mod error;
pub mod golden;
pub mod patterns;
pub mod sweep;
pub mod verify;
pub mod wide;

pub use census::{
    conditional_quad_densities, density_estimate, dropping_census, dropping_time, feasibility_report,
    pattern_census, DropTime, DroppingStats, FeasibilityReport, PatternCensus,
};
pub use classifier::{
    classification_rules, classify_quad, classify_triple, verify_partition, QuadClassification,
    QuadOutcome, ResidueClass, TripleClassification, TripleOutcome,
};
pub use core_map::{collatz1_step, collatz_step, is_in_r0, r_k, syracuse_step, trajectory, OddInt, Trajectory};
pub use error::{Error, Result};
pub use patterns::{
    has_incdec_pattern, pattern_of, search_incdec, tuple_pattern, IncDecPattern, PermPattern, TuplePattern,
};
