//! Text and CSV renderings of experiment results.

use std::fmt::Write;

use altcipher_core::qsec::CSV_HEADER;
use altcipher_core::ExactReport;

use crate::experiments::ExperimentResult;

pub const REPORT_HEADER: [&str; 5] = ["experiment", "quantity", "expected", "actual", "verdict"];

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn write_csv<R: AsRef<[String]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.as_ref()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// `experiment,quantity,expected,actual,verdict`, one row per check.
pub fn to_csv(results: &[ExperimentResult]) -> String {
    let rows = results.iter().flat_map(|r| {
        r.checks.iter().map(move |c| {
            vec![r.id.clone(), c.quantity.clone(), c.expected.clone(), c.actual.clone(), verdict(c.pass).to_string()]
        })
    });
    write_csv(&REPORT_HEADER, rows)
}

/// `q,tuple,metric,value_left,value_right,verdict` for one comparison.
pub fn comparison_csv(report: &ExactReport, per_tuple: bool) -> String {
    write_csv(&CSV_HEADER, report.csv_rows(per_tuple).iter().map(|r| r.to_vec()))
}

pub fn to_text(results: &[ExperimentResult], per_tuple: bool) -> String {
    let mut s = String::new();
    let mut failed = 0;
    let mut checks = 0;
    for r in results {
        let _ = writeln!(s, "== {}: {} ==", r.id, r.parameters);
        for note in &r.notes {
            let _ = writeln!(s, "note: {note}");
        }
        let width = r.checks.iter().map(|c| c.quantity.len()).max().unwrap_or(8).max(8);
        let _ = writeln!(s, "{:<width$}  {:<28}  {:<28}  verdict", "quantity", "expected", "actual");
        for c in &r.checks {
            let _ = writeln!(s, "{:<width$}  {:<28}  {:<28}  {}", c.quantity, c.expected, c.actual, verdict(c.pass));
        }
        if let Some(report) = &r.comparison {
            s.push_str(&report.to_text(per_tuple));
        }
        s.push('\n');
        checks += r.checks.len();
        failed += r.checks.iter().filter(|c| !c.pass).count();
    }
    let _ = writeln!(s, "{} experiments, {checks} checks, {failed} failed", results.len());
    s
}
