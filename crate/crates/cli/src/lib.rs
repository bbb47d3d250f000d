//! Command dispatch for the `syra` binary.
//!
//! [`run`] turns a validated [`RunConfig`] into a report body and an exit
//! status. Nothing here writes to stdout; the binary decides where the body
//! goes and sends progress notes to stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::value::RawValue;
use syracuse_core::census::{
    dropping_census, feasibility_report, format_ratio, pattern_census, PatternCensus,
};
use syracuse_core::classifier::{classify_quad, classify_triple, QuadOutcome, TripleOutcome};
use syracuse_core::patterns::{search_incdec, tuple_pattern, IncDecPattern, MAX_PATTERN_LEN};
use syracuse_core::verify::{
    classifier_suite, golden_suite, lemma_suite, partition_suite, SuiteReport, LEMMA_MAX_DEPTH,
    LEMMA_MEMBERS,
};
use syracuse_core::{density_estimate, Error, OddInt, PermPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    Partitions,
    Classifier,
    Goldens,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Classify { m: u128, n: usize },
    Census { max: u64, n: usize },
    Density { max: u64, n: usize, pattern: PermPattern },
    Dropping { max: u64, k: u32, cap: u32 },
    Feasibility { max: u64, n: usize },
    Verify { suite: Suite, max: u64 },
    Incdec { pattern: IncDecPattern, max: u128 },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Census { .. } => "census",
            Command::Density { .. } => "density",
            Command::Dropping { .. } => "dropping",
            Command::Feasibility { .. } => "feasibility",
            Command::Verify { .. } => "verify",
            Command::Incdec { .. } => "incdec",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Classify { .. } | Command::Feasibility { .. } | Command::Incdec { .. } => Format::Json,
            Command::Verify { .. } => Format::Table,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub workers: usize,
    pub format: Option<Format>,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| self.command.default_format())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        let check_n = |n: usize| {
            if n == 0 || n > MAX_PATTERN_LEN {
                Err(CliError::Usage(format!("--n must be in 1..={MAX_PATTERN_LEN}, got {n}")))
            } else {
                Ok(())
            }
        };
        let check_max = |max: u64| {
            if max == 0 {
                Err(CliError::Usage("--max must be at least 1".into()))
            } else {
                Ok(())
            }
        };
        match &self.command {
            Command::Classify { m, n } => {
                if m % 2 == 0 {
                    return Err(CliError::Usage(format!("--m must be a positive odd integer, got {m}")));
                }
                if !matches!(n, 3 | 4) {
                    return Err(CliError::Usage(format!("--n must be 3 or 4 for classify, got {n}")));
                }
            }
            Command::Census { max, n } | Command::Feasibility { max, n } => {
                check_max(*max)?;
                check_n(*n)?;
            }
            Command::Density { max, n, pattern } => {
                check_max(*max)?;
                check_n(*n)?;
                if pattern.len() != *n {
                    return Err(CliError::Usage(format!(
                        "--pattern {pattern} has length {}, --n is {n}",
                        pattern.len()
                    )));
                }
            }
            Command::Dropping { max, k, cap } => {
                if *max < 3 {
                    return Err(CliError::Usage("--max must be at least 3 for dropping".into()));
                }
                if *k == 0 || *cap == 0 {
                    return Err(CliError::Usage("--k and --cap must be at least 1".into()));
                }
                if k > cap {
                    return Err(CliError::Usage(format!("--k {k} exceeds --cap {cap}")));
                }
            }
            Command::Verify { max, .. } => check_max(*max)?,
            Command::Incdec { max, .. } => {
                if *max == 0 {
                    return Err(CliError::Usage("--max must be at least 1".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Overflow { m: u128 },
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Overflow { .. } => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Overflow { m } => write!(f, "arithmetic overflow: 128-bit range exceeded while iterating m = {m}"),
            CliError::Failure(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Overflow { m } => CliError::Overflow { m },
            Error::NotOdd(_)
            | Error::InvalidArgument(_)
            | Error::InvalidPattern(_)
            | Error::PatternLengthMismatch { .. } => CliError::Usage(e.to_string()),
            Error::RepeatedCoordinate { .. } | Error::InternalPartitionViolation { .. } => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(format!("csv: {e}"))
    }
}

/// A finished command: the data stream body and whether every check passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub passed: bool,
}

impl Report {
    fn ok(body: String) -> Self {
        Report { body, passed: true }
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// A ratio as a JSON number carrying exactly 12 significant digits.
fn ratio_json(x: f64) -> Box<RawValue> {
    RawValue::from_string(format_ratio(x)).expect("formatted ratio is a JSON number")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

fn csv_body(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failure(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn table_body(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for row in &rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn tabular(format: Format, header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    match format {
        Format::Table => Ok(table_body(header, rows)),
        _ => csv_body(header, rows),
    }
}

fn odd(m: u128) -> Result<OddInt, CliError> {
    OddInt::new(m).map_err(CliError::from)
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let format = config.format();
    let workers = config.workers;
    match &config.command {
        Command::Classify { m, n } => classify(*m, *n, format),
        Command::Census { max, n } => {
            eprintln!("census: n = {n}, {} odd m <= {max}, {workers} worker(s)", max.div_ceil(2));
            let census = pattern_census(*max, *n, workers)?;
            census_report(&census, format).map(Report::ok)
        }
        Command::Density { max, n, pattern } => {
            let census = pattern_census(*max, *n, workers)?;
            let d = density_estimate(&census, pattern)?;
            let body = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        n: usize,
                        #[serde(rename = "M")]
                        max: u64,
                        pattern: PermPattern,
                        count: u64,
                        denominator: u64,
                        ratio: Box<RawValue>,
                    }
                    json(&Out {
                        n: *n,
                        max: *max,
                        pattern: *pattern,
                        count: d.count,
                        denominator: d.denominator,
                        ratio: ratio_json(d.ratio),
                    })
                }
                _ => tabular(
                    format,
                    &["pattern", "count", "ratio"],
                    vec![vec![pattern.to_string(), d.count.to_string(), format_ratio(d.ratio)]],
                )?,
            };
            Ok(Report::ok(body))
        }
        Command::Dropping { max, k, cap } => {
            eprintln!("dropping: odd 1 < m <= {max}, cap {cap}, {workers} worker(s)");
            let stats = dropping_census(*max, *cap, workers)?;
            eprintln!("dropping: {} start values with D(m) > {cap}", stats.undecided);
            let rows: Vec<(u32, u64, f64)> = (1..=*k).map(|j| (j, stats.n_k(j), stats.ratio(j))).collect();
            let body = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        k: u32,
                        #[serde(rename = "N_k")]
                        n_k: u64,
                        ratio: Box<RawValue>,
                    }
                    #[derive(Serialize)]
                    struct Out {
                        x: u64,
                        cap: u32,
                        denominator: u64,
                        undecided: u64,
                        rows: Vec<Row>,
                    }
                    json(&Out {
                        x: *max,
                        cap: *cap,
                        denominator: max.div_ceil(2),
                        undecided: stats.undecided,
                        rows: rows
                            .iter()
                            .map(|&(k, n_k, r)| Row { k, n_k, ratio: ratio_json(r) })
                            .collect(),
                    })
                }
                _ => tabular(
                    format,
                    &["k", "N_k", "ratio"],
                    rows.iter()
                        .map(|&(k, n_k, r)| vec![k.to_string(), n_k.to_string(), format_ratio(r)])
                        .collect(),
                )?,
            };
            Ok(Report::ok(body))
        }
        Command::Feasibility { max, n } => {
            eprintln!("feasibility: n = {n}, odd m <= {max}, {workers} worker(s)");
            let report = feasibility_report(*max, *n, workers)?;
            let passed = report.consistent();
            if !passed {
                let seen: Vec<String> = report
                    .proved_impossible
                    .iter()
                    .filter(|p| report.observed.contains(p))
                    .map(ToString::to_string)
                    .collect();
                eprintln!("feasibility: proved-impossible patterns observed: {}", seen.join(" "));
            }
            let body = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out<'a> {
                        #[serde(flatten)]
                        report: &'a syracuse_core::FeasibilityReport,
                        consistent: bool,
                    }
                    json(&Out { report: &report, consistent: passed })
                }
                _ => {
                    let rows = PermPattern::all(*n)?
                        .into_iter()
                        .map(|p| {
                            let status = if report.proved_impossible.contains(&p) {
                                if report.observed.contains(&p) {
                                    "proved_impossible_but_observed"
                                } else {
                                    "proved_impossible"
                                }
                            } else if report.observed.contains(&p) {
                                "observed"
                            } else {
                                "unobserved"
                            };
                            vec![p.to_string(), status.to_string()]
                        })
                        .collect();
                    tabular(format, &["pattern", "status"], rows)?
                }
            };
            Ok(Report { body, passed })
        }
        Command::Verify { suite, max } => {
            let report = match suite {
                Suite::Lemmas => lemma_suite(LEMMA_MAX_DEPTH, LEMMA_MEMBERS)?,
                Suite::Partitions => partition_suite(u128::from(*max))?,
                Suite::Classifier => classifier_suite(*max, workers)?,
                Suite::Goldens => golden_suite(&[1, workers])?,
            };
            let passed = report.passed();
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("verify: {c}");
            }
            Ok(Report {
                body: suite_body(&report, format)?,
                passed,
            })
        }
        Command::Incdec { pattern, max } => {
            let witness = search_incdec(pattern, *max)?;
            let body = match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        pattern: String,
                        max: u128,
                        witness: Option<u128>,
                    }
                    json(&Out {
                        pattern: pattern.to_string(),
                        max: *max,
                        witness: witness.map(OddInt::get),
                    })
                }
                _ => tabular(
                    format,
                    &["pattern", "max", "witness"],
                    vec![vec![
                        pattern.to_string(),
                        max.to_string(),
                        witness.map(|w| w.to_string()).unwrap_or_default(),
                    ]],
                )?,
            };
            Ok(Report::ok(body))
        }
    }
}

#[derive(Serialize)]
struct Classified {
    m: u128,
    pattern: Option<PermPattern>,
    rule: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
    outcome: &'static str,
    /// Directly computed pattern, for comparison with the prediction.
    observed: Option<PermPattern>,
}

fn classify(m: u128, n: usize, format: Format) -> Result<Report, CliError> {
    let value = odd(m)?;
    let observed = tuple_pattern(value, n)?.pattern();
    let c = if n == 3 {
        let t = classify_triple(value)?;
        let outcome = match t.outcome {
            TripleOutcome::Pattern(_) => "pattern",
            TripleOutcome::ReachesOne => "reaches-one",
            TripleOutcome::Unit => "unit",
        };
        Classified { m, pattern: t.pattern(), rule: t.rule.id(), k: t.k, outcome, observed }
    } else {
        let q = classify_quad(value)?;
        let outcome = match q.outcome {
            QuadOutcome::Pattern(_) => "pattern",
            QuadOutcome::OutOfRuleDomain => "out-of-rule-domain",
            QuadOutcome::ReachesOne => "reaches-one",
            QuadOutcome::Unit => "unit",
        };
        Classified { m, pattern: q.pattern(), rule: q.rule.id(), k: q.k, outcome, observed }
    };
    let body = match format {
        Format::Json => json(&c),
        _ => {
            let show = |p: Option<PermPattern>| p.map(|p| p.to_string()).unwrap_or_default();
            tabular(
                format,
                &["m", "pattern", "rule", "k", "outcome", "observed"],
                vec![vec![
                    m.to_string(),
                    show(c.pattern),
                    c.rule.to_string(),
                    c.k.map(|k| k.to_string()).unwrap_or_default(),
                    c.outcome.to_string(),
                    show(c.observed),
                ]],
            )?
        }
    };
    Ok(Report::ok(body))
}

/// Census body: the JSON schema `{n, M, denominator, repeated, counts}` or
/// `pattern,count,ratio` rows for the observed patterns.
pub fn census_report(census: &PatternCensus, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(json(census)),
        _ => {
            let rows = census
                .counts
                .iter()
                .map(|(p, &c)| vec![p.to_string(), c.to_string(), format_ratio(census.ratio(p))])
                .collect();
            let mut body = String::new();
            if format == Format::Table {
                let _ = writeln!(
                    body,
                    "n = {}, M = {}, denominator = {}, repeated = {}",
                    census.n, census.max, census.denominator, census.repeated
                );
            }
            body.push_str(&tabular(format, &["pattern", "count", "ratio"], rows)?);
            Ok(body)
        }
    }
}

fn suite_body(report: &SuiteReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(json(report)),
        Format::Csv => csv_body(
            &["check", "passed", "counterexample", "detail"],
            report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.passed.to_string(),
                        c.counterexample.clone().unwrap_or_default(),
                        c.detail.clone(),
                    ]
                })
                .collect(),
        ),
        Format::Table => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "{c}");
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(s, "{}: {} checks, {failed} failed", report.suite, report.checks.len());
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command) -> RunConfig {
        RunConfig { command, workers: 1, format: None, output_path: None }
    }

    #[test]
    fn classify_json_matches_contract() {
        let r = run(&cfg(Command::Classify { m: 13, n: 3 })).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["m"], 13);
        assert_eq!(v["pattern"], "3,2,1");
        assert_eq!(v["rule"], "Lemma1");
        assert_eq!(v["k"], 1);
        assert_eq!(v["observed"], "3,2,1");
    }

    #[test]
    fn validation_errors_are_usage_errors() {
        for command in [
            Command::Classify { m: 12, n: 3 },
            Command::Classify { m: 13, n: 5 },
            Command::Census { max: 0, n: 3 },
            Command::Census { max: 10, n: 9 },
            Command::Density { max: 10, n: 3, pattern: "2,1".parse().unwrap() },
            Command::Dropping { max: 100, k: 10, cap: 5 },
        ] {
            let e = run(&cfg(command.clone())).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{command:?}");
        }
        let mut c = cfg(Command::Census { max: 10, n: 3 });
        c.workers = 0;
        assert_eq!(run(&c).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn overflow_names_m() {
        let m = (1u128 << 126) + 3;
        let e = run(&cfg(Command::Classify { m, n: 4 })).unwrap_err();
        assert_eq!(e, CliError::Overflow { m });
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains(&m.to_string()));
    }

    #[test]
    fn csv_quotes_patterns() {
        let r = run(&cfg(Command::Census { max: 7, n: 2 })).unwrap();
        assert_eq!(r.body, "pattern,count,ratio\n\"1,2\",2,0.500000000000\n\"2,1\",1,0.250000000000\n");
    }

    #[test]
    fn ratio_json_has_twelve_digits() {
        let mut c = cfg(Command::Density { max: 1000, n: 2, pattern: "2,1".parse().unwrap() });
        c.format = Some(Format::Json);
        let r = run(&c).unwrap();
        assert!(r.body.contains("\"ratio\": 0.498000000000"), "{}", r.body);
    }

    #[test]
    fn table_alignment() {
        let t = table_body(&["a", "bb"], vec![vec!["long".into(), "x".into()]]);
        assert_eq!(t, "a     bb\nlong  x\n");
    }
}
