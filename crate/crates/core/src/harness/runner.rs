//! Corpus execution: expand the config into an instance grid, evaluate every
//! (instance, check, variant) cell plus the identity-residual grid, and
//! assemble a deterministic report.
//!
//! Instances are evaluated in parallel (one task per instance); each cell is
//! self-contained, and rows are sorted by (instance id, check id, variant)
//! afterwards, so the report does not depend on scheduling. An evaluation
//! error in one cell becomes an `indeterminate` row and never aborts the run.

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::fracops::{FracMode, FracParams};
use crate::harness::config::CorpusConfig;
use crate::harness::report::{
    format_f64, summarize, ReportRow, ResidualRow, RunReport, Summary,
};
use crate::identities::{lemma1_residual, lemma2_residual};
use crate::ineqchecks::{run_check, CheckInstance, Status};
use crate::parallel::{map_slice, ExecMode};
use crate::testfuncs::corpus_lookup;

/// Content hash of the instance coordinates; stable across runs and
/// processes, used to join rows between reports.
#[allow(clippy::too_many_arguments)]
fn instance_id(
    label: &str,
    alpha: f64,
    a: f64,
    b: f64,
    x: Option<f64>,
    y: Option<f64>,
    m: Option<f64>,
    q: Option<f64>,
) -> String {
    let part = |v: Option<f64>| v.map(format_f64).unwrap_or_else(|| "-".to_string());
    let key = format!(
        "{label}|{}|{}|{}|{}|{}|{}|{}",
        format_f64(alpha),
        format_f64(a),
        format_f64(b),
        part(x),
        part(y),
        part(m),
        part(q)
    );
    let digest = Sha256::digest(key.as_bytes());
    hex_prefix(&digest, 16)
}

fn hex_prefix(bytes: &[u8], len: usize) -> String {
    let mut s = String::with_capacity(len);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
        if s.len() >= len {
            break;
        }
    }
    s.truncate(len);
    s
}

/// Digest of the validated config body.
pub fn config_digest(cfg: &CorpusConfig) -> String {
    let body = serde_json::to_string(cfg).expect("config serialization is infallible");
    let digest = Sha256::digest(body.as_bytes());
    hex_prefix(&digest, 64)
}

/// Run the full corpus with the default execution mode.
pub fn run_corpus(cfg: &CorpusConfig) -> Result<RunReport> {
    run_corpus_mode(cfg, ExecMode::default())
}

pub fn run_corpus_mode(cfg: &CorpusConfig, mode: ExecMode) -> Result<RunReport> {
    let settings = cfg.check_settings(mode);
    let residual_tol = cfg.residual_tol();

    // Instance grid: label x alpha x interval x m x q.
    let mut instances: Vec<(String, CheckInstance)> = Vec::new();
    for label in &cfg.functions {
        let f = corpus_lookup(label)?;
        for &alpha in &cfg.alphas {
            for &(a, b) in &cfg.intervals {
                let params = FracParams::new(alpha, a, b)?;
                let w = b - a;
                let x = a + cfg.x_frac * w;
                let y = a + cfg.y_frac * w;
                for &m in &cfg.ms {
                    for &q in &cfg.qs {
                        let id = instance_id(
                            label,
                            alpha,
                            a,
                            b,
                            Some(x),
                            Some(y),
                            Some(m),
                            Some(q),
                        );
                        let inst =
                            CheckInstance::new(f.clone(), params, x, Some(y), m, Some(q))?;
                        instances.push((id, inst));
                    }
                }
            }
        }
    }

    let row_groups = map_slice(&instances, mode, |(id, inst)| {
        let mut rows = Vec::with_capacity(cfg.checks.len() * cfg.variants.len());
        for &check in &cfg.checks {
            for &variant in &cfg.variants {
                let row = match run_check(check, inst, variant, &settings) {
                    Ok(outcome) => ReportRow::from_outcome(id.clone(), outcome),
                    Err(e) => ReportRow {
                        instance_id: id.clone(),
                        check_id: check,
                        variant,
                        lhs: None,
                        rhs: None,
                        margin: None,
                        status: Status::Indeterminate,
                        tight: false,
                        est_error: 0.0,
                        note: Some(format!("evaluation error: {e}")),
                        instance: inst.summary(),
                    },
                };
                rows.push(row);
            }
        }
        rows
    });
    let mut rows: Vec<ReportRow> = row_groups.into_iter().flatten().collect();
    rows.sort_by(|p, r| {
        (&p.instance_id, p.check_id, p.variant).cmp(&(&r.instance_id, r.check_id, r.variant))
    });

    // Residual grid: label x fractional alpha x interval, one row per lemma.
    let mut residual_specs: Vec<(String, String, f64, f64, f64)> = Vec::new();
    for label in &cfg.functions {
        for &alpha in &cfg.alphas {
            for &(a, b) in &cfg.intervals {
                if FracParams::new(alpha, a, b)?.mode != FracMode::Fractional {
                    continue;
                }
                let id = instance_id(label, alpha, a, b, None, None, None, None);
                residual_specs.push((id, label.clone(), alpha, a, b));
            }
        }
    }
    let residual_groups = map_slice(&residual_specs, mode, |(id, label, alpha, a, b)| {
        let mut out = Vec::with_capacity(2);
        let f = corpus_lookup(label).expect("labels validated at parse time");
        let params = FracParams::new(*alpha, *a, *b).expect("validated interval");
        let w = b - a;
        let (x, y) = (a + cfg.x_frac * w, a + cfg.y_frac * w);

        let base = |lemma: u8| ResidualRow {
            instance_id: id.clone(),
            lemma,
            label: label.clone(),
            alpha: *alpha,
            a: *a,
            b: *b,
            x: None,
            y: None,
            lhs: None,
            rhs: None,
            residual: None,
            est_error: 0.0,
            within_tol: false,
            note: None,
        };

        let mut row1 = base(1);
        match lemma1_residual(&f, &params, &residual_tol) {
            Ok(r) => {
                row1.lhs = Some(r.lhs);
                row1.rhs = Some(r.rhs);
                row1.residual = Some(r.residual);
                row1.est_error = r.est_error;
                row1.within_tol = r.residual <= cfg.tolerances.identity_residual;
            }
            Err(e) => row1.note = Some(format!("evaluation error: {e}")),
        }
        out.push(row1);

        let mut row2 = base(2);
        row2.x = Some(x);
        row2.y = Some(y);
        match lemma2_residual(&f, &params, x, y, &residual_tol) {
            Ok(r) => {
                row2.lhs = Some(r.lhs);
                row2.rhs = Some(r.rhs);
                row2.residual = Some(r.residual);
                row2.est_error = r.est_error;
                row2.within_tol = r.residual <= cfg.tolerances.identity_residual;
            }
            Err(e) => row2.note = Some(format!("evaluation error: {e}")),
        }
        out.push(row2);
        out
    });
    let mut residuals: Vec<ResidualRow> = residual_groups.into_iter().flatten().collect();
    residuals.sort_by(|p, r| (&p.instance_id, p.lemma).cmp(&(&r.instance_id, r.lemma)));

    let summary: Summary = summarize(&rows, &residuals);
    Ok(RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_digest: config_digest(cfg),
        rows,
        residuals,
        summary,
    })
}
