//! Run report assembly and rendering.
//!
//! Every floating-point value is serialized as decimal with 17 significant
//! digits, which round-trips f64 exactly; two runs over the same config
//! produce byte-identical documents. The structured format is JSON, the
//! tabular format a tab-separated table of the same rows, and both share the
//! same number formatting.

use serde::Serialize;
use std::collections::BTreeMap;
use std::io;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ineqchecks::{CheckId, CheckOutcome, InstanceSummary, Status, Variant};

/// 17-significant-digit decimal rendering of a double.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// One (instance, check, variant) cell of the run matrix.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub instance_id: String,
    pub check_id: CheckId,
    pub variant: Variant,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub status: Status,
    pub tight: bool,
    pub est_error: f64,
    pub note: Option<String>,
    pub instance: InstanceSummary,
}

impl ReportRow {
    pub fn from_outcome(instance_id: String, o: CheckOutcome) -> Self {
        ReportRow {
            instance_id,
            check_id: o.check_id,
            variant: o.variant,
            lhs: o.lhs,
            rhs: o.rhs,
            margin: o.margin,
            status: o.status,
            tight: o.tight,
            est_error: o.est_error,
            note: o.note,
            instance: o.instance,
        }
    }
}

/// One identity-residual evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub instance_id: String,
    pub lemma: u8,
    pub label: String,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub residual: Option<f64>,
    pub est_error: f64,
    pub within_tol: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub rows_total: usize,
    /// Row counts keyed "check/variant/status".
    pub counts: BTreeMap<String, usize>,
    pub chain_failures: usize,
    pub stated_failures: usize,
    pub residuals_total: usize,
    pub residual_failures: usize,
    pub max_residual_lemma1: f64,
    pub max_residual_lemma2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: String,
    pub config_digest: String,
    pub rows: Vec<ReportRow>,
    pub residuals: Vec<ResidualRow>,
    pub summary: Summary,
}

impl RunReport {
    /// CI gate: rigor failures only. Stated-variant failures are findings and
    /// never fail the gate.
    pub fn gate_passes(&self) -> bool {
        self.summary.chain_failures == 0 && self.summary.residual_failures == 0
    }
}

pub fn summarize(rows: &[ReportRow], residuals: &[ResidualRow]) -> Summary {
    let mut summary = Summary {
        rows_total: rows.len(),
        residuals_total: residuals.len(),
        ..Summary::default()
    };
    for r in rows {
        *summary
            .counts
            .entry(format!("{}/{}/{}", r.check_id, r.variant, r.status))
            .or_insert(0) += 1;
        if r.status == Status::Fails {
            match r.variant {
                Variant::Chain => summary.chain_failures += 1,
                Variant::Stated => summary.stated_failures += 1,
            }
        }
    }
    for r in residuals {
        if !r.within_tol {
            summary.residual_failures += 1;
        }
        if let Some(res) = r.residual {
            match r.lemma {
                1 => summary.max_residual_lemma1 = summary.max_residual_lemma1.max(res),
                _ => summary.max_residual_lemma2 = summary.max_residual_lemma2.max(res),
            }
        }
    }
    summary
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Structured,
    Tabular,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "structured" => Ok(OutputFormat::Structured),
            "tabular" => Ok(OutputFormat::Tabular),
            other => Err(Error::config(format!(
                "unknown format {other:?}; expected \"structured\" or \"tabular\""
            ))),
        }
    }
}

/// JSON formatter that writes every f64 with 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize any value as JSON with the 17-significant-digit float policy.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter);
    value.serialize(&mut ser).expect("serialization is infallible");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

pub fn render_structured(report: &RunReport) -> String {
    to_json_17(report)
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_else(|| "null".to_string())
}

fn opt_note(n: &Option<String>) -> String {
    n.as_deref().unwrap_or("").replace(['\t', '\n'], " ")
}

pub fn render_tabular(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# fraclab report v{} config {}\n",
        report.version, report.config_digest
    ));

    out.push_str("# rows\n");
    out.push_str(
        "instance_id\tcheck_id\tvariant\tlhs\trhs\tmargin\tstatus\ttight\test_error\tnote\t\
         label\talpha\ta\tb\tx\ty\tm\tq\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.instance_id,
            r.check_id,
            r.variant,
            opt(r.lhs),
            opt(r.rhs),
            opt(r.margin),
            r.status,
            r.tight,
            format_f64(r.est_error),
            opt_note(&r.note),
            r.instance.label,
            format_f64(r.instance.alpha),
            format_f64(r.instance.a),
            format_f64(r.instance.b),
            format_f64(r.instance.x),
            opt(r.instance.y),
            format_f64(r.instance.m),
            opt(r.instance.q),
        ));
    }

    out.push_str("# residuals\n");
    out.push_str(
        "instance_id\tlemma\tlabel\talpha\ta\tb\tx\ty\tlhs\trhs\tresidual\test_error\t\
         within_tol\tnote\n",
    );
    for r in &report.residuals {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.instance_id,
            r.lemma,
            r.label,
            format_f64(r.alpha),
            format_f64(r.a),
            format_f64(r.b),
            opt(r.x),
            opt(r.y),
            opt(r.lhs),
            opt(r.rhs),
            opt(r.residual),
            format_f64(r.est_error),
            r.within_tol,
            opt_note(&r.note),
        ));
    }

    out.push_str("# summary\n");
    out.push_str(&format!("rows_total\t{}\n", report.summary.rows_total));
    for (key, n) in &report.summary.counts {
        out.push_str(&format!("count\t{key}\t{n}\n"));
    }
    out.push_str(&format!("chain_failures\t{}\n", report.summary.chain_failures));
    out.push_str(&format!("stated_failures\t{}\n", report.summary.stated_failures));
    out.push_str(&format!("residuals_total\t{}\n", report.summary.residuals_total));
    out.push_str(&format!("residual_failures\t{}\n", report.summary.residual_failures));
    out.push_str(&format!(
        "max_residual_lemma1\t{}\n",
        format_f64(report.summary.max_residual_lemma1)
    ));
    out.push_str(&format!(
        "max_residual_lemma2\t{}\n",
        format_f64(report.summary.max_residual_lemma2)
    ));
    out
}

pub fn render_report(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Structured => render_structured(report),
        OutputFormat::Tabular => render_tabular(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.0, 1.0 / 3.0, -2.5e-11, 8.0 / (3.0 * std::f64::consts::PI.sqrt()), 1e300] {
            let s = format_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn empty_report_renders_in_both_formats() {
        let report = RunReport {
            version: "0.1.0".into(),
            config_digest: "deadbeef".into(),
            rows: vec![],
            residuals: vec![],
            summary: summarize(&[], &[]),
        };
        let json = render_structured(&report);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["rows"].as_array().unwrap().len(), 0);
        assert_eq!(parsed["summary"]["rows_total"], 0);
        let tab = render_tabular(&report);
        assert!(tab.contains("# rows"));
        assert!(tab.contains("rows_total\t0"));
        assert!(report.gate_passes());
    }
}
