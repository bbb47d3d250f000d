//! Congruence-class rules predicting the patterns of `(m, S(m), S^2(m))` and
//! `(m, S(m), S^2(m), S^3(m))` from the residue of `m`.
//!
//! Triples outside `5 (mod 8)` are decided by a residue modulo 8 or 16. The
//! class `5 (mod 8)` is split recursively: at depth `k` the class
//! `r_k (mod 2 * 4^k)` divides into four leaf families (two giving `(3,2,1)`,
//! two giving `(3,1,2)`) and the continuation class `r_{k+1} (mod 2 * 4^{k+1})`.

use std::fmt;

use serde::Serialize;

use crate::core_map::{is_in_r0, r_k_raw, OddInt, MAX_R_K};
use crate::error::{Error, Result};
use crate::patterns::PermPattern;

/// The congruence class `residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ResidueClass {
    residue: u128,
    modulus: u128,
}

impl ResidueClass {
    /// Reduces `residue` into `0..modulus`.
    pub fn new(residue: u128, modulus: u128) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        Ok(ResidueClass {
            residue: residue % modulus,
            modulus,
        })
    }

    pub fn residue(&self) -> u128 {
        self.residue
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    #[inline]
    pub fn contains(&self, m: u128) -> bool {
        m % self.modulus == self.residue
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

fn class(residue: u128, modulus: u128) -> ResidueClass {
    ResidueClass { residue, modulus }
}

fn pat(entries: &[u8]) -> PermPattern {
    PermPattern::new(entries).expect("static rule pattern")
}

/// The four parametric families splitting `r_k (mod 2 * 4^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Lemma {
    /// `r_k + 2 * 4^k (mod 2 * 4^{k+1})`, pattern `(3,2,1)`.
    One,
    /// `r_k (mod 4^{k+2})`, pattern `(3,2,1)` except `m = r_k` itself.
    Two,
    /// `r_{k+1} + 2 * 4^k (mod 2 * 4^{k+1})`, pattern `(3,1,2)`.
    Three,
    /// `r_{k+1} + 4^{k+1} (mod 4^{k+2})`, pattern `(3,1,2)`.
    Four,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::One, Lemma::Two, Lemma::Three, Lemma::Four];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::One => "Lemma1",
            Lemma::Two => "Lemma2",
            Lemma::Three => "Lemma3",
            Lemma::Four => "Lemma4",
        }
    }

    pub fn pattern(self) -> PermPattern {
        match self {
            Lemma::One | Lemma::Two => pat(&[3, 2, 1]),
            Lemma::Three | Lemma::Four => pat(&[3, 1, 2]),
        }
    }

    /// The family's congruence class at depth `k`, `1 <= k <= MAX_LEMMA_DEPTH`.
    pub fn class(self, k: u32) -> Result<ResidueClass> {
        if k == 0 || k > MAX_LEMMA_DEPTH {
            return Err(Error::InvalidArgument(format!(
                "lemma depth {k} outside 1..={MAX_LEMMA_DEPTH}"
            )));
        }
        let d = Depth::new(k);
        Ok(match self {
            Lemma::One => class(d.lemma1, d.wide),
            Lemma::Two => class(d.lemma2, d.deep),
            Lemma::Three => class(d.lemma3, d.wide),
            Lemma::Four => class(d.lemma4, d.deep),
        })
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Deepest family level whose moduli fit in 128 bits.
pub const MAX_LEMMA_DEPTH: u32 = MAX_R_K - 1;

/// Residues and moduli of the split at depth `k`.
struct Depth {
    /// `2 * 4^{k+1}`
    wide: u128,
    /// `4^{k+2}`
    deep: u128,
    lemma1: u128,
    lemma2: u128,
    lemma3: u128,
    lemma4: u128,
    /// `r_{k+1}`, residue of the continuation class modulo `wide`.
    next: u128,
}

impl Depth {
    #[inline]
    fn new(k: u32) -> Depth {
        debug_assert!((1..=MAX_LEMMA_DEPTH).contains(&k));
        let four_k = 1u128 << (2 * k);
        let rk = r_k_raw(k);
        let rk1 = r_k_raw(k + 1);
        Depth {
            wide: 8 * four_k,
            deep: 16 * four_k,
            lemma1: rk + 2 * four_k,
            lemma2: rk,
            lemma3: rk1 + 2 * four_k,
            lemma4: rk1 + 4 * four_k,
            next: rk1,
        }
    }
}

/// Which rule decided a classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum TripleRule {
    Unit,
    R0,
    Mod8Is7,
    Mod16Is9,
    Mod16Is11,
    Mod16Is3,
    Mod16Is1,
    Family(Lemma),
}

impl TripleRule {
    pub fn id(self) -> &'static str {
        match self {
            TripleRule::Unit => "Unit",
            TripleRule::R0 => "R0",
            TripleRule::Mod8Is7 => "Triple-7mod8",
            TripleRule::Mod16Is9 => "Triple-9mod16",
            TripleRule::Mod16Is11 => "Triple-11mod16",
            TripleRule::Mod16Is3 => "Triple-3mod16",
            TripleRule::Mod16Is1 => "Triple-1mod16",
            TripleRule::Family(l) => l.id(),
        }
    }
}

impl From<TripleRule> for &'static str {
    fn from(r: TripleRule) -> Self {
        r.id()
    }
}

impl fmt::Display for TripleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripleOutcome {
    Pattern(PermPattern),
    /// `m` is in R_0, so the triple is `(m, 1, 1)`.
    ReachesOne,
    /// `m = 1`.
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleClassification {
    pub outcome: TripleOutcome,
    pub rule: TripleRule,
    /// Family depth for the `5 (mod 8)` rules, or the R_0 witness.
    pub k: Option<u32>,
}

impl TripleClassification {
    pub fn pattern(&self) -> Option<PermPattern> {
        match self.outcome {
            TripleOutcome::Pattern(p) => Some(p),
            _ => None,
        }
    }
}

/// Predicts the pattern of `(m, S(m), S^2(m))` from the residue of `m`.
pub fn classify_triple(m: OddInt) -> Result<TripleClassification> {
    let v = m.get();
    if v == 1 {
        return Ok(TripleClassification {
            outcome: TripleOutcome::Unit,
            rule: TripleRule::Unit,
            k: None,
        });
    }
    if let Some(k) = is_in_r0(m) {
        return Ok(TripleClassification {
            outcome: TripleOutcome::ReachesOne,
            rule: TripleRule::R0,
            k: Some(k),
        });
    }
    let fixed = |rule, p: &[u8]| {
        Ok(TripleClassification {
            outcome: TripleOutcome::Pattern(pat(p)),
            rule,
            k: None,
        })
    };
    if v % 8 == 7 {
        return fixed(TripleRule::Mod8Is7, &[1, 2, 3]);
    }
    match v % 16 {
        9 => return fixed(TripleRule::Mod16Is9, &[2, 1, 3]),
        11 => return fixed(TripleRule::Mod16Is11, &[1, 3, 2]),
        3 => return fixed(TripleRule::Mod16Is3, &[2, 3, 1]),
        1 => return fixed(TripleRule::Mod16Is1, &[3, 2, 1]),
        _ => {}
    }
    debug_assert_eq!(v % 8, 5);
    let (lemma, k) = five_mod_eight_family(v)?;
    Ok(TripleClassification {
        outcome: TripleOutcome::Pattern(lemma.pattern()),
        rule: TripleRule::Family(lemma),
        k: Some(k),
    })
}

/// Walks the `5 (mod 8)` split for `m` not in R_0, returning the leaf family and depth.
fn five_mod_eight_family(m: u128) -> Result<(Lemma, u32)> {
    let bits = 128 - m.leading_zeros();
    let cap = bits.div_ceil(2) + 2;
    let mut k = 1;
    loop {
        if k > cap {
            return Err(Error::InternalPartitionViolation { m });
        }
        if k > MAX_LEMMA_DEPTH {
            return Err(Error::Overflow { m });
        }
        let d = Depth::new(k);
        let low_wide = m & (d.wide - 1);
        let low_deep = m & (d.deep - 1);
        if low_wide == d.lemma1 {
            return Ok((Lemma::One, k));
        }
        if low_deep == d.lemma2 {
            return Ok((Lemma::Two, k));
        }
        if low_wide == d.lemma3 {
            return Ok((Lemma::Three, k));
        }
        if low_deep == d.lemma4 {
            return Ok((Lemma::Four, k));
        }
        if low_wide != d.next {
            return Err(Error::InternalPartitionViolation { m });
        }
        k += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "&'static str")]
pub enum QuadRule {
    Unit,
    R0,
    OutOfRuleDomain,
    Mod16Is15,
    Mod32Is7,
    Mod32Is23,
    Mod32Is27,
    Mod32Is11,
    Mod32Is9,
    Mod64Is57,
    Mod64Is25,
}

impl QuadRule {
    pub fn id(self) -> &'static str {
        match self {
            QuadRule::Unit => "Unit",
            QuadRule::R0 => "R0",
            QuadRule::OutOfRuleDomain => "OutOfRuleDomain",
            QuadRule::Mod16Is15 => "Quad123-15mod16",
            QuadRule::Mod32Is7 => "Quad123-7mod32",
            QuadRule::Mod32Is23 => "Quad123-23mod32",
            QuadRule::Mod32Is27 => "Quad132-27mod32",
            QuadRule::Mod32Is11 => "Quad132-11mod32",
            QuadRule::Mod32Is9 => "Quad213-9mod32",
            QuadRule::Mod64Is57 => "Quad213-57mod64",
            QuadRule::Mod64Is25 => "Quad213-25mod64",
        }
    }
}

impl From<QuadRule> for &'static str {
    fn from(r: QuadRule) -> Self {
        r.id()
    }
}

impl fmt::Display for QuadRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadOutcome {
    Pattern(PermPattern),
    /// The triple pattern of `m` is `(2,3,1)`, `(3,1,2)` or `(3,2,1)`; no rule applies.
    OutOfRuleDomain,
    ReachesOne,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadClassification {
    pub outcome: QuadOutcome,
    pub rule: QuadRule,
    /// R_0 witness when the outcome is `ReachesOne`.
    pub k: Option<u32>,
}

impl QuadClassification {
    pub fn pattern(&self) -> Option<PermPattern> {
        match self.outcome {
            QuadOutcome::Pattern(p) => Some(p),
            _ => None,
        }
    }
}

const QUAD_RULES: [(u128, u128, [u8; 4], QuadRule); 8] = [
    (15, 16, [1, 2, 3, 4], QuadRule::Mod16Is15),
    (7, 32, [1, 2, 4, 3], QuadRule::Mod32Is7),
    (23, 32, [2, 3, 4, 1], QuadRule::Mod32Is23),
    (27, 32, [1, 3, 2, 4], QuadRule::Mod32Is27),
    (11, 32, [2, 4, 3, 1], QuadRule::Mod32Is11),
    (9, 32, [2, 1, 3, 4], QuadRule::Mod32Is9),
    (57, 64, [3, 1, 4, 2], QuadRule::Mod64Is57),
    (25, 64, [3, 2, 4, 1], QuadRule::Mod64Is25),
];

/// Predicts the pattern of `(m, S(m), S^2(m), S^3(m))` on the residues the
/// quadruple rules cover: `7 (mod 8)`, `11 (mod 16)` and `9 (mod 16)`.
pub fn classify_quad(m: OddInt) -> Result<QuadClassification> {
    let v = m.get();
    if v == 1 {
        return Ok(QuadClassification {
            outcome: QuadOutcome::Unit,
            rule: QuadRule::Unit,
            k: None,
        });
    }
    if let Some(k) = is_in_r0(m) {
        return Ok(QuadClassification {
            outcome: QuadOutcome::ReachesOne,
            rule: QuadRule::R0,
            k: Some(k),
        });
    }
    for (residue, modulus, p, rule) in QUAD_RULES {
        if v % modulus == residue {
            return Ok(QuadClassification {
                outcome: QuadOutcome::Pattern(pat(&p)),
                rule,
                k: None,
            });
        }
    }
    Ok(QuadClassification {
        outcome: QuadOutcome::OutOfRuleDomain,
        rule: QuadRule::OutOfRuleDomain,
        k: None,
    })
}

/// Selector of a rule-table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSelector {
    Class(ResidueClass),
    /// A family instantiated for every depth `k >= 1`.
    Family(Lemma),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleEntry {
    pub selector: RuleSelector,
    pub pattern: PermPattern,
    pub rule_id: &'static str,
}

/// The static rules behind [`classify_triple`] (`level = 3`) or
/// [`classify_quad`] (`level = 4`). R_0 and `m = 1` are handled before any
/// table entry and do not appear here.
pub fn classification_rules(level: u8) -> Result<Vec<RuleEntry>> {
    let entry = |selector, p: &[u8], rule_id| RuleEntry {
        selector,
        pattern: pat(p),
        rule_id,
    };
    match level {
        3 => {
            let mut rules = vec![
                entry(RuleSelector::Class(class(7, 8)), &[1, 2, 3], TripleRule::Mod8Is7.id()),
                entry(RuleSelector::Class(class(9, 16)), &[2, 1, 3], TripleRule::Mod16Is9.id()),
                entry(RuleSelector::Class(class(11, 16)), &[1, 3, 2], TripleRule::Mod16Is11.id()),
                entry(RuleSelector::Class(class(3, 16)), &[2, 3, 1], TripleRule::Mod16Is3.id()),
                entry(RuleSelector::Class(class(1, 16)), &[3, 2, 1], TripleRule::Mod16Is1.id()),
            ];
            for lemma in Lemma::ALL {
                rules.push(RuleEntry {
                    selector: RuleSelector::Family(lemma),
                    pattern: lemma.pattern(),
                    rule_id: lemma.id(),
                });
            }
            Ok(rules)
        }
        4 => Ok(QUAD_RULES
            .iter()
            .map(|(r, m, p, rule)| entry(RuleSelector::Class(class(*r, *m)), p, rule.id()))
            .collect()),
        _ => Err(Error::InvalidArgument(format!("rule level must be 3 or 4, got {level}"))),
    }
}

/// Flat, serialisable form of a rule; families appear once per depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub residue: u128,
    pub modulus: u128,
    pub pattern: PermPattern,
    pub rule_id: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

/// Rule table as records, with each family instantiated for `k = 1..=max_k`.
pub fn rule_records(level: u8, max_k: u32) -> Result<Vec<RuleRecord>> {
    let mut out = Vec::new();
    for rule in classification_rules(level)? {
        match rule.selector {
            RuleSelector::Class(c) => out.push(RuleRecord {
                residue: c.residue,
                modulus: c.modulus,
                pattern: rule.pattern,
                rule_id: rule.rule_id,
                k: None,
            }),
            RuleSelector::Family(lemma) => {
                for k in 1..=max_k {
                    let c = lemma.class(k)?;
                    out.push(RuleRecord {
                        residue: c.residue,
                        modulus: c.modulus,
                        pattern: rule.pattern,
                        rule_id: rule.rule_id,
                        k: Some(k),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartitionCheck {
    pub holds: bool,
    /// Least integer in `[1, bound]` that is in the parent but not in exactly
    /// one child, or in a child but not in the parent.
    pub counterexample: Option<u128>,
}

/// Checks on `[1, bound]` that `children` partition `parent`.
pub fn verify_partition(
    parent: ResidueClass,
    children: &[ResidueClass],
    bound: u128,
) -> Result<PartitionCheck> {
    let largest = children.iter().map(|c| c.modulus).chain([parent.modulus]).max().unwrap();
    if bound < largest {
        return Err(Error::InvalidArgument(format!(
            "bound {bound} is below the largest modulus {largest}"
        )));
    }
    for m in 1..=bound {
        let hits = children.iter().filter(|c| c.contains(m)).count();
        let ok = if parent.contains(m) { hits == 1 } else { hits == 0 };
        if !ok {
            return Ok(PartitionCheck {
                holds: false,
                counterexample: Some(m),
            });
        }
    }
    Ok(PartitionCheck {
        holds: true,
        counterexample: None,
    })
}

/// A partition claim from the classification proofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPartition {
    pub name: String,
    pub parent: ResidueClass,
    pub children: Vec<ResidueClass>,
}

impl NamedPartition {
    pub fn largest_modulus(&self) -> u128 {
        self.children.iter().map(|c| c.modulus).chain([self.parent.modulus]).max().unwrap()
    }
}

/// Every partition the classification relies on, with the depth-`k` split of
/// `r_k (mod 2 * 4^k)` included for `k = 1..=max_depth`.
pub fn partition_claims(max_depth: u32) -> Result<Vec<NamedPartition>> {
    let named = |name: &str, parent, children: Vec<ResidueClass>| NamedPartition {
        name: name.to_string(),
        parent,
        children,
    };
    let mut out = vec![
        named(
            "odd integers: five triple classes plus 5 (mod 8)",
            class(1, 2),
            vec![class(7, 8), class(9, 16), class(11, 16), class(3, 16), class(1, 16), class(5, 8)],
        ),
        named(
            "5 (mod 8) at depth 1",
            class(5, 8),
            vec![class(13, 32), class(5, 64), class(29, 32), class(37, 64), class(21, 32)],
        ),
        named(
            "21 (mod 32) at depth 2",
            class(21, 32),
            vec![class(53, 128), class(21, 256), class(117, 128), class(149, 256), class(85, 128)],
        ),
        named("7 (mod 8) into quadruple classes", class(7, 8), vec![class(15, 16), class(7, 32), class(23, 32)]),
        named("11 (mod 16) into quadruple classes", class(11, 16), vec![class(11, 32), class(27, 32)]),
        named("9 (mod 16) into quadruple classes", class(9, 16), vec![class(9, 32), class(25, 64), class(57, 64)]),
    ];
    for k in 1..=max_depth {
        if k > MAX_LEMMA_DEPTH {
            return Err(Error::InvalidArgument(format!("depth {k} exceeds {MAX_LEMMA_DEPTH}")));
        }
        let d = Depth::new(k);
        let mut children = Lemma::ALL.iter().map(|l| l.class(k)).collect::<Result<Vec<_>>>()?;
        children.push(class(d.next, d.wide));
        out.push(named(
            &format!("r_{k} (mod 2*4^{k}) into families"),
            class(r_k_raw(k), 2u128 << (2 * k)),
            children,
        ));
    }
    Ok(out)
}
