//! Run configuration: a TOML document validated against the corpus and the
//! check vocabulary. The annotated schema ships in `configs/schema.toml`.

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::identities::ResidualTol;
use crate::ineqchecks::{CheckId, CheckSettings, Variant};
use crate::parallel::ExecMode;
use crate::testfuncs::corpus_standard;

/// Tolerances and sampling resolutions, all overridable from the document.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Quadrature tolerance for operator evaluation.
    pub operator: f64,
    /// Quadrature tolerance for identity right sides and bound integrals.
    pub quadrature: f64,
    /// Acceptance threshold on identity residuals.
    pub identity_residual: f64,
    /// Absolute part of the inequality status threshold.
    pub status_abs: f64,
    /// Relative part of the inequality status threshold.
    pub status_rel: f64,
    /// Sample count for positivity hypotheses.
    pub positivity_samples: usize,
    /// Grid resolution per axis for m-convexity hypotheses.
    pub mconvex_grid: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            operator: 1e-11,
            quadrature: 1e-10,
            identity_residual: 1e-6,
            status_abs: 1e-9,
            status_rel: 1e-9,
            positivity_samples: 1001,
            mconvex_grid: 17,
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawSampling {
    x_frac: f64,
    y_frac: f64,
}

impl Default for RawSampling {
    fn default() -> Self {
        RawSampling { x_frac: 0.25, y_frac: 0.75 }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RawConfig {
    functions: Option<Vec<String>>,
    alphas: Option<Vec<f64>>,
    intervals: Option<Vec<[f64; 2]>>,
    ms: Option<Vec<f64>>,
    qs: Option<Vec<f64>>,
    checks: Option<Vec<String>>,
    variants: Option<Vec<String>>,
    sampling: RawSampling,
    tolerances: Tolerances,
}

/// Validated corpus run configuration with defaults filled in.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusConfig {
    pub functions: Vec<String>,
    pub alphas: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub ms: Vec<f64>,
    pub qs: Vec<f64>,
    pub checks: Vec<CheckId>,
    pub variants: Vec<Variant>,
    /// One-point checks evaluate at x = a + x_frac·(b−a).
    pub x_frac: f64,
    /// Two-point checks use (x, y) at (x_frac, y_frac) of the interval.
    pub y_frac: f64,
    pub tolerances: Tolerances,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        parse_config("").expect("empty document yields the default config")
    }
}

impl CorpusConfig {
    pub fn check_settings(&self, exec: ExecMode) -> CheckSettings {
        CheckSettings {
            operator_tol: self.tolerances.operator,
            quad_tol: self.tolerances.quadrature,
            status_abs: self.tolerances.status_abs,
            status_rel: self.tolerances.status_rel,
            positivity_samples: self.tolerances.positivity_samples,
            mconvex_grid: self.tolerances.mconvex_grid,
            exec,
        }
    }

    pub fn residual_tol(&self) -> ResidualTol {
        ResidualTol {
            operator: self.tolerances.operator,
            quadrature: self.tolerances.quadrature,
        }
    }
}

/// Parse and validate a configuration document. Defaults: the whole standard
/// corpus, α in {0.25, 0.5, 0.75, 1.5, 2.5}, intervals [0,1] and [0.5,1.5],
/// m in {0.25, 0.5, 1.0}, q in {2, 3}, every check, both variants.
pub fn parse_config(text: &str) -> Result<CorpusConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;

    let corpus_labels: Vec<String> =
        corpus_standard().iter().map(|f| f.label().to_string()).collect();

    let functions = raw.functions.unwrap_or_else(|| corpus_labels.clone());
    if functions.is_empty() {
        return Err(Error::config("functions list must not be empty"));
    }
    for label in &functions {
        if !corpus_labels.contains(label) {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }

    let alphas = raw.alphas.unwrap_or_else(|| vec![0.25, 0.5, 0.75, 1.5, 2.5]);
    if alphas.is_empty() {
        return Err(Error::config("alphas list must not be empty"));
    }
    for &a in &alphas {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::config(format!("alpha values must be finite and >= 0, got {a}")));
        }
    }

    let intervals_raw = raw.intervals.unwrap_or_else(|| vec![[0.0, 1.0], [0.5, 1.5]]);
    if intervals_raw.is_empty() {
        return Err(Error::config("intervals list must not be empty"));
    }
    let mut intervals = Vec::with_capacity(intervals_raw.len());
    for [a, b] in intervals_raw {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::config(format!("interval must satisfy a < b, got [{a}, {b}]")));
        }
        if a < 0.0 {
            return Err(Error::config(format!(
                "intervals must lie in [0, inf) (corpus domain), got a = {a}"
            )));
        }
        intervals.push((a, b));
    }

    let ms = raw.ms.unwrap_or_else(|| vec![0.25, 0.5, 1.0]);
    for &m in &ms {
        if !(m > 0.0 && m <= 1.0) {
            return Err(Error::config(format!("m values must lie in (0, 1], got {m}")));
        }
    }
    let qs = raw.qs.unwrap_or_else(|| vec![2.0, 3.0]);
    for &q in &qs {
        if !(q > 1.0) {
            return Err(Error::config(format!("q values must exceed 1, got {q}")));
        }
    }
    if ms.is_empty() || qs.is_empty() {
        return Err(Error::config("ms and qs lists must not be empty"));
    }

    let checks = match raw.checks {
        None => CheckId::REPORTABLE.to_vec(),
        Some(names) => {
            let mut out = Vec::with_capacity(names.len());
            for n in &names {
                out.push(CheckId::from_str(n)?);
            }
            if out.is_empty() {
                return Err(Error::config("checks list must not be empty"));
            }
            out
        }
    };

    let variants = match raw.variants {
        None => vec![Variant::Stated, Variant::Chain],
        Some(names) => {
            let mut out = Vec::with_capacity(names.len());
            for n in &names {
                out.push(Variant::from_str(n)?);
            }
            if out.is_empty() {
                return Err(Error::config("variants list must not be empty"));
            }
            out
        }
    };

    let RawSampling { x_frac, y_frac } = raw.sampling;
    if !(x_frac > 0.0 && x_frac < 1.0 && y_frac > 0.0 && y_frac < 1.0 && x_frac < y_frac) {
        return Err(Error::config(format!(
            "sampling fractions must satisfy 0 < x_frac < y_frac < 1, got ({x_frac}, {y_frac})"
        )));
    }

    let t = raw.tolerances;
    if !(t.operator > 0.0 && t.quadrature > 0.0 && t.identity_residual > 0.0)
        || !(t.status_abs > 0.0 && t.status_rel >= 0.0)
    {
        return Err(Error::config("tolerances must be positive"));
    }
    if t.positivity_samples < 2 || t.mconvex_grid < 3 {
        return Err(Error::config(
            "positivity_samples must be >= 2 and mconvex_grid >= 3",
        ));
    }

    Ok(CorpusConfig {
        functions,
        alphas,
        intervals,
        ms,
        qs,
        checks,
        variants,
        x_frac,
        y_frac,
        tolerances: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = parse_config("functions = [\"mono2\"]").unwrap();
        assert_eq!(cfg.functions, vec!["mono2"]);
        assert_eq!(cfg.alphas.len(), 5);
        assert_eq!(cfg.ms, vec![0.25, 0.5, 1.0]);
        assert_eq!(cfg.qs, vec![2.0, 3.0]);
        assert_eq!(cfg.checks.len(), 10);
        assert_eq!(cfg.variants.len(), 2);
    }

    #[test]
    fn unknown_label_is_named() {
        let err = parse_config("functions = [\"mono99\"]").unwrap_err();
        assert!(err.to_string().contains("mono99"), "{err}");
    }

    #[test]
    fn negative_alpha_rejected() {
        assert!(parse_config("alphas = [-1.0]").is_err());
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let err = parse_config("nonsense = 3").unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn parse_errors_carry_line_information() {
        let err = parse_config("functions = [\"mono1\"]\nalphas = \"oops\"").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn bad_sampling_rejected() {
        assert!(parse_config("[sampling]\nx_frac = 0.9\ny_frac = 0.1").is_err());
    }

    #[test]
    fn check_and_variant_lists_parse() {
        let cfg = parse_config("checks = [\"T5\"]\nvariants = [\"stated\"]").unwrap();
        assert_eq!(cfg.checks, vec![CheckId::T5]);
        assert_eq!(cfg.variants, vec![Variant::Stated]);
        assert!(parse_config("checks = [\"T9\"]").is_err());
        assert!(parse_config("variants = [\"loose\"]").is_err());
    }
}
