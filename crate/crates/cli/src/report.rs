//! Result rows, the sweep summary, and the CSV / JSON / table writers.

use std::fmt::Write as _;
use std::io::Write;

use pmiwasawa::mazur_tate::Verdict;
use serde::{Deserialize, Serialize};

use crate::cache::sha256_hex;
use crate::CliError;

/// Version of the CSV column layout and JSON field set.
pub const REPORT_VERSION: u32 = 1;

/// Outcome of an inequality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Holds,
    Violated,
}

impl From<bool> for Check {
    fn from(ok: bool) -> Self {
        if ok {
            Check::Holds
        } else {
            Check::Violated
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Pass,
    Fail,
    Na,
}

impl From<Verdict> for Bound {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Bound::Pass,
            Verdict::Fail => Bound::Fail,
            Verdict::NotApplicable => Bound::Na,
        }
    }
}

/// Rank-0 expectation: `lambda^± = 0` and `mu^± = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Ok,
    Warn,
    Na,
}

/// One `(curve, p)` cell of the sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub label: String,
    pub p: u64,
    pub a_p: i64,
    /// `[0]^+ != 0`, i.e. `L(E, 1) != 0`.
    pub analytic_rank_zero: bool,
    pub mu_plus: Option<u32>,
    pub lambda_plus: Option<usize>,
    pub mu_minus: Option<u32>,
    pub lambda_minus: Option<usize>,
    /// Witness levels, e.g. `"1-3"`.
    pub plus_levels: Option<String>,
    pub minus_levels: Option<String>,
    /// `mu:lambda` of each computed `theta_n`, `0` for the zero element.
    pub theta_invariants: String,
    pub ord_s1: Option<i64>,
    pub ord_s2: Option<i64>,
    pub ord_s3: Option<i64>,
    pub ord_s4: Option<i64>,
    pub s1_size: Option<Check>,
    pub s2_size: Option<Check>,
    pub s3_size: Option<Check>,
    pub s4_size: Option<Check>,
    pub bound_minus_l0: Bound,
    pub bound_plus_l0: Bound,
    pub bound_minus_l1: Bound,
    pub bound_plus_l1: Bound,
    pub sup_n1: Option<Check>,
    pub sup_n2: Option<Check>,
    pub sup_n3: Option<Check>,
    /// `max_a |[a/p^2]^+|`.
    pub sup_p2: Option<String>,
    pub expectation: Expectation,
    pub anomaly: bool,
    pub error: Option<String>,
    pub runtime_ms: u64,
}

impl ResultRow {
    /// A row for a cell that failed before any invariants were read.
    pub fn failed(label: &str, p: u64, a_p: i64, error: String, anomaly: bool) -> Self {
        ResultRow {
            label: label.to_string(),
            p,
            a_p,
            analytic_rank_zero: false,
            mu_plus: None,
            lambda_plus: None,
            mu_minus: None,
            lambda_minus: None,
            plus_levels: None,
            minus_levels: None,
            theta_invariants: String::new(),
            ord_s1: None,
            ord_s2: None,
            ord_s3: None,
            ord_s4: None,
            s1_size: None,
            s2_size: None,
            s3_size: None,
            s4_size: None,
            bound_minus_l0: Bound::Na,
            bound_plus_l0: Bound::Na,
            bound_minus_l1: Bound::Na,
            bound_plus_l1: Bound::Na,
            sup_n1: None,
            sup_n2: None,
            sup_n3: None,
            sup_p2: None,
            expectation: Expectation::Na,
            anomaly,
            error: Some(error),
            runtime_ms: 0,
        }
    }

    pub fn bounds(&self) -> [Bound; 4] {
        [
            self.bound_minus_l0,
            self.bound_plus_l0,
            self.bound_minus_l1,
            self.bound_plus_l1,
        ]
    }

    pub fn sup_flags(&self) -> [Option<Check>; 3] {
        [self.sup_n1, self.sup_n2, self.sup_n3]
    }
}

/// Extremal value of some statistic and the first row attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremum {
    pub value: u64,
    pub label: String,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupViolation {
    pub label: String,
    pub p: u64,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    /// Rows with `lambda^- = 0`, and those among them with `mu^- <= 1`.
    pub minus_lambda0: usize,
    pub minus_lambda0_within: usize,
    /// Rows with `lambda^+ = 0`, and those among them with `mu^+ <= 2`.
    pub plus_lambda0: usize,
    pub plus_lambda0_within: usize,
    pub bound_failures: usize,
    pub sup_violations: Vec<SupViolation>,
    pub max_mu_plus: Option<Extremum>,
    pub max_mu_minus: Option<Extremum>,
    pub max_lambda_plus: Option<Extremum>,
    pub max_lambda_minus: Option<Extremum>,
    pub not_stabilized: usize,
    pub expectation_warnings: usize,
    pub anomalies: usize,
    pub errors: usize,
}

fn track(slot: &mut Option<Extremum>, value: Option<u64>, row: &ResultRow) {
    if let Some(v) = value {
        if slot.as_ref().is_none_or(|e| v > e.value) {
            *slot = Some(Extremum {
                value: v,
                label: row.label.clone(),
                p: row.p,
            });
        }
    }
}

pub fn summarize(rows: &[ResultRow]) -> Summary {
    let mut s = Summary {
        rows: rows.len(),
        ..Summary::default()
    };
    for row in rows {
        if row.lambda_minus == Some(0) {
            s.minus_lambda0 += 1;
            s.minus_lambda0_within += usize::from(row.mu_minus.is_some_and(|m| m <= 1));
        }
        if row.lambda_plus == Some(0) {
            s.plus_lambda0 += 1;
            s.plus_lambda0_within += usize::from(row.mu_plus.is_some_and(|m| m <= 2));
        }
        s.bound_failures += row.bounds().iter().filter(|b| **b == Bound::Fail).count();
        for (i, c) in row.sup_flags().iter().enumerate() {
            if *c == Some(Check::Violated) {
                s.sup_violations.push(SupViolation {
                    label: row.label.clone(),
                    p: row.p,
                    n: i as u32 + 1,
                });
            }
        }
        track(&mut s.max_mu_plus, row.mu_plus.map(u64::from), row);
        track(&mut s.max_mu_minus, row.mu_minus.map(u64::from), row);
        track(&mut s.max_lambda_plus, row.lambda_plus.map(|l| l as u64), row);
        track(&mut s.max_lambda_minus, row.lambda_minus.map(|l| l as u64), row);
        if row.error.is_none() && (row.mu_plus.is_none() || row.mu_minus.is_none()) {
            s.not_stabilized += 1;
        }
        s.expectation_warnings += usize::from(row.expectation == Expectation::Warn);
        s.anomalies += usize::from(row.anomaly);
        s.errors += usize::from(row.error.is_some());
    }
    s
}

/// Column names in CSV order; `runtime_ms` is always last.
pub const CSV_COLUMNS: [&str; 31] = [
    "label",
    "p",
    "a_p",
    "analytic_rank_zero",
    "mu_plus",
    "lambda_plus",
    "mu_minus",
    "lambda_minus",
    "plus_levels",
    "minus_levels",
    "theta_invariants",
    "ord_s1",
    "ord_s2",
    "ord_s3",
    "ord_s4",
    "s1_size",
    "s2_size",
    "s3_size",
    "s4_size",
    "bound_minus_l0",
    "bound_plus_l0",
    "bound_minus_l1",
    "bound_plus_l1",
    "sup_n1",
    "sup_n2",
    "sup_n3",
    "sup_p2",
    "expectation",
    "anomaly",
    "error",
    "runtime_ms",
];

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut out = out;
    writeln!(
        out,
        "# pmiwasawa results v{REPORT_VERSION}; columns: {}",
        CSV_COLUMNS.join(",")
    )?;
    // the header row is written explicitly so that empty reports keep it
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// CSV text with the `runtime_ms` column removed from every data line.
pub fn csv_without_runtime(csv: &str) -> String {
    csv.lines()
        .map(|line| {
            if line.starts_with('#') {
                line.to_string()
            } else {
                match line.rfind(',') {
                    Some(i) => line[..i].to_string(),
                    None => line.to_string(),
                }
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// sha256 of the CSV report minus the runtime column.
pub fn determinism_hash(rows: &[ResultRow]) -> String {
    sha256_hex(csv_without_runtime(&csv_string(rows)).as_bytes())
}

#[derive(Serialize)]
struct JsonReport<'a> {
    version: u32,
    rows: &'a [ResultRow],
    summary: &'a Summary,
}

pub fn write_json<W: Write>(out: W, rows: &[ResultRow], summary: &Summary) -> Result<(), CliError> {
    let report = JsonReport {
        version: REPORT_VERSION,
        rows,
        summary,
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(())
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

fn check(c: Option<Check>) -> &'static str {
    match c {
        Some(Check::Holds) => "ok",
        Some(Check::Violated) => "no",
        None => "-",
    }
}

fn bound(b: Bound) -> &'static str {
    match b {
        Bound::Pass => "ok",
        Bound::Fail => "FAIL",
        Bound::Na => "-",
    }
}

pub fn render_table(rows: &[ResultRow], summary: &Summary) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:<10} {:>4} {:>4} {:>4} {:>4} {:>4} {:>8}  {:<19} {:<13} {:<6} {:>7}",
        "curve", "p", "mu+", "lam+", "mu-", "lam-", "lvls", "bounds -0 +0 -1 +1", "sup n1 n2 n3", "rank0", "ms"
    );
    for r in rows {
        if let Some(e) = &r.error {
            let _ = writeln!(t, "{:<10} {:>4}  error: {e}", r.label, r.p);
            continue;
        }
        let lv = format!(
            "{}/{}",
            r.plus_levels.as_deref().unwrap_or("-"),
            r.minus_levels.as_deref().unwrap_or("-")
        );
        let b = r.bounds().map(bound).join(" ");
        let c = r.sup_flags().map(check).join(" ");
        let exp = match r.expectation {
            Expectation::Ok => "ok",
            Expectation::Warn => "WARN",
            Expectation::Na => "n/a",
        };
        let _ = writeln!(
            t,
            "{:<10} {:>4} {:>4} {:>4} {:>4} {:>4} {:>8}  {:<19} {:<13} {:<6} {:>7}",
            r.label,
            r.p,
            opt(&r.mu_plus),
            opt(&r.lambda_plus),
            opt(&r.mu_minus),
            opt(&r.lambda_minus),
            lv,
            b,
            c,
            exp,
            r.runtime_ms
        );
    }
    let _ = writeln!(t);
    let _ = writeln!(t, "rows: {}", summary.rows);
    let _ = writeln!(
        t,
        "lambda- = 0: {} rows, mu- <= 1 in {}",
        summary.minus_lambda0, summary.minus_lambda0_within
    );
    let _ = writeln!(
        t,
        "lambda+ = 0: {} rows, mu+ <= 2 in {}",
        summary.plus_lambda0, summary.plus_lambda0_within
    );
    let _ = writeln!(t, "bound failures: {}", summary.bound_failures);
    let viol: Vec<String> = summary
        .sup_violations
        .iter()
        .map(|v| format!("{} p={} n={}", v.label, v.p, v.n))
        .collect();
    let _ = writeln!(
        t,
        "sup-norm violations: {}",
        if viol.is_empty() { "none".into() } else { viol.join(", ") }
    );
    let ext = |e: &Option<Extremum>| {
        e.as_ref()
            .map_or("-".into(), |e| format!("{} ({} p={})", e.value, e.label, e.p))
    };
    let _ = writeln!(
        t,
        "max mu+: {}  max mu-: {}  max lambda+: {}  max lambda-: {}",
        ext(&summary.max_mu_plus),
        ext(&summary.max_mu_minus),
        ext(&summary.max_lambda_plus),
        ext(&summary.max_lambda_minus)
    );
    let _ = writeln!(
        t,
        "not stabilized: {}  expectation warnings: {}  anomalies: {}  errors: {}",
        summary.not_stabilized, summary.expectation_warnings, summary.anomalies, summary.errors
    );
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(label: &str, p: u64, mu: (u32, u32), lambda: (usize, usize)) -> ResultRow {
        let mut r = ResultRow::failed(label, p, 0, String::new(), false);
        r.error = None;
        r.mu_plus = Some(mu.0);
        r.mu_minus = Some(mu.1);
        r.lambda_plus = Some(lambda.0);
        r.lambda_minus = Some(lambda.1);
        r.expectation = Expectation::Ok;
        r
    }

    #[test]
    fn empty_summary() {
        assert_eq!(summarize(&[]), Summary::default());
    }

    #[test]
    fn all_zero_rows_are_within_bounds() {
        let rows = vec![row("a", 19, (0, 0), (0, 0)), row("a", 29, (0, 0), (0, 0))];
        let s = summarize(&rows);
        assert_eq!((s.minus_lambda0, s.minus_lambda0_within), (2, 2));
        assert_eq!((s.plus_lambda0, s.plus_lambda0_within), (2, 2));
    }

    #[test]
    fn empty_csv_keeps_header() {
        let text = csv_string(&[]);
        assert_eq!(text.lines().nth(1), Some(CSV_COLUMNS.join(",").as_str()));
    }

    #[test]
    fn csv_layout() {
        let mut r = row("11a1", 19, (0, 0), (0, 0));
        r.runtime_ms = 17;
        let text = csv_string(&[r]);
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# pmiwasawa results v1"));
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let data = lines.next().unwrap();
        assert!(data.starts_with("11a1,19,0,false,0,0,0,0,"));
        assert!(data.ends_with(",17"));
        assert!(!csv_without_runtime(&text).contains(",17"));
    }

    #[test]
    fn csv_round_trips_through_serde() {
        let mut r = row("37a1", 17, (0, 0), (1, 3));
        r.sup_n2 = Some(Check::Violated);
        r.sup_p2 = Some("7/2".into());
        let text = csv_string(std::slice::from_ref(&r));
        let body: String = text.lines().skip(1).collect::<Vec<_>>().join("\n");
        let mut rd = csv::Reader::from_reader(body.as_bytes());
        let back: ResultRow = rd.deserialize().next().unwrap().unwrap();
        assert_eq!(back, r);
    }
}
