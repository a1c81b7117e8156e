//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Timed criteria share a process-wide gate so wall-clock limits are not
//! polluted by concurrent tests; the default corpus run is executed once and
//! shared, with its own wall time recorded at materialization.

use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use fraclab_core::fracops::{caputo_left, verify_caputo_rl_relation, FracParams, OPERATOR_TOL};
use fraclab_core::harness::{
    format_f64, parse_config, render_structured, run_corpus, CorpusConfig, RunReport,
};
use fraclab_core::identities::{lemma1_residual, lemma2_residual, ResidualTol};
use fraclab_core::ineqchecks::{
    remark1_compare, run_check, CheckId, CheckInstance, CheckSettings, Status, Variant,
};
use fraclab_core::quadrature::{integrate_weighted_endpoint, kernel_moment, SingularEnd};
use fraclab_core::specfun::gamma_fn;
use fraclab_core::testfuncs::{
    claim_quantity, corpus_standard, is_m_convex, standard_claims, witness_violation,
    FunctionSpec, MCONVEX_TOL,
};

static GATE: Mutex<()> = Mutex::new(());
static DEFAULT_RUN: OnceLock<(RunReport, Duration)> = OnceLock::new();

fn locked() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

fn default_config() -> CorpusConfig {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/default.toml"
    ))
    .expect("default config ships in the repo");
    parse_config(&text).expect("default config is valid")
}

fn default_run() -> &'static (RunReport, Duration) {
    DEFAULT_RUN.get_or_init(|| {
        let cfg = default_config();
        let t0 = Instant::now();
        let report = run_corpus(&cfg).expect("default corpus run succeeds");
        (report, t0.elapsed())
    })
}

fn report_line(n: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "[acceptance] criterion {n} ({name}): {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_01_quadrature_oracle_suite() {
    let _g = locked();
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for &s in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        for k in 0..=6u32 {
            for &(a, x) in &[(0.0, 1.0), (0.5, 2.5)] {
                let want = kernel_moment(a, x, s, k).unwrap();
                let got = integrate_weighted_endpoint(
                    |t| (t - a).powi(k as i32),
                    a,
                    x,
                    s,
                    SingularEnd::Upper,
                    1e-11,
                )
                .unwrap();
                worst = worst.max((got.value - want).abs() / want.abs());
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = worst <= 1e-10 && elapsed < Duration::from_secs(2);
    report_line(
        1,
        "quadrature oracle suite",
        ok,
        &format!("worst rel err {worst:.3e}, {elapsed:.2?}"),
    );
    assert!(ok, "worst rel err {worst:.3e}, elapsed {elapsed:?}");
}

#[test]
fn criterion_02_caputo_power_rule() {
    let _g = locked();
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for k in [2u32, 3, 4] {
        let f = FunctionSpec::monomial("tk", 1.0, k);
        for alpha in [0.25, 0.5, 1.5, 2.5] {
            if alpha >= k as f64 {
                continue;
            }
            let params = FracParams::new(alpha, 0.0, 2.0).unwrap();
            for x in [0.5, 1.0, 2.0] {
                let got = caputo_left(&f, &params, x, OPERATOR_TOL).unwrap();
                let want = gamma_fn(k as f64 + 1.0).unwrap()
                    / gamma_fn(k as f64 - alpha + 1.0).unwrap()
                    * x.powf(k as f64 - alpha);
                worst = worst.max((got - want).abs() / want.abs());
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = worst <= 1e-8 && elapsed < Duration::from_secs(2);
    report_line(
        2,
        "caputo power rule",
        ok,
        &format!("worst rel err {worst:.3e}, {elapsed:.2?}"),
    );
    assert!(ok, "worst rel err {worst:.3e}, elapsed {elapsed:?}");
}

#[test]
fn criterion_03_composition_relation() {
    let _g = locked();
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for f in corpus_standard() {
        for alpha in [0.25, 0.5, 0.75, 1.5, 2.5] {
            let params = FracParams::new(alpha, 0.0, 1.0).unwrap();
            for x in [0.25, 0.5, 0.75] {
                let r = verify_caputo_rl_relation(&f, &params, x, OPERATOR_TOL).unwrap();
                worst = worst.max(r);
                count += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = worst <= 2e-9 && elapsed < Duration::from_secs(5);
    report_line(
        3,
        "composition relation",
        ok,
        &format!("{count} cases, worst residual {worst:.3e}, {elapsed:.2?}"),
    );
    assert!(ok, "worst residual {worst:.3e}, elapsed {elapsed:?}");
}

#[test]
fn criterion_04_identity_residual_suites() {
    let _g = locked();
    let t0 = Instant::now();
    let tol = ResidualTol::default();
    let mut n1 = 0;
    let mut n2 = 0;
    let mut worst1: f64 = 0.0;
    let mut worst2: f64 = 0.0;
    let mut worst_const: f64 = 0.0;
    for f in corpus_standard() {
        for alpha in [0.25, 0.5, 0.75, 1.5, 2.5] {
            for (a, b) in [(0.0, 1.0), (0.5, 1.5)] {
                let params = FracParams::new(alpha, a, b).unwrap();
                let constant_case = f.derivative(params.n + 1).unwrap().is_constant();

                let r1 = lemma1_residual(&f, &params, &tol).unwrap();
                worst1 = worst1.max(r1.residual);
                n1 += 1;

                let (x, y) = (a + 0.25 * (b - a), a + 0.75 * (b - a));
                let r2 = lemma2_residual(&f, &params, x, y, &tol).unwrap();
                worst2 = worst2.max(r2.residual);
                n2 += 1;

                if constant_case {
                    worst_const = worst_const.max(r1.residual).max(r2.residual);
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    let ok = n1 >= 60
        && n2 >= 60
        && worst1 <= 1e-6
        && worst2 <= 1e-6
        && worst_const <= 1e-9
        && elapsed < Duration::from_secs(30);
    report_line(
        4,
        "identity residual suites",
        ok,
        &format!(
            "{n1}+{n2} instances, worst {} / {}, constant-case {}, {elapsed:.2?}",
            format_f64(worst1),
            format_f64(worst2),
            format_f64(worst_const)
        ),
    );
    assert!(ok, "n=({n1},{n2}), worst=({worst1:.3e},{worst2:.3e}), const={worst_const:.3e}, {elapsed:?}");
}

#[test]
fn criterion_05_chain_dominance() {
    let _g = locked();
    let (report, elapsed) = default_run();
    let theorem_ids = [CheckId::T1, CheckId::T2, CheckId::T3, CheckId::T4, CheckId::T5, CheckId::T6];
    let mut evaluated = 0usize;
    let mut failures = 0usize;
    for row in &report.rows {
        if row.variant == Variant::Chain && theorem_ids.contains(&row.check_id) {
            match row.status {
                Status::Holds => evaluated += 1,
                Status::Fails => {
                    evaluated += 1;
                    failures += 1;
                }
                _ => {}
            }
        }
    }
    let ok = evaluated >= 200 && failures == 0 && *elapsed < Duration::from_secs(60);
    report_line(
        5,
        "chain dominance",
        ok,
        &format!("{evaluated} hypothesis-passing chain rows, {failures} failures, run took {elapsed:.2?}"),
    );
    assert!(ok, "evaluated={evaluated}, failures={failures}, elapsed {elapsed:?}");
}

#[test]
fn criterion_06_constant_derivative_tightness() {
    let _g = locked();
    let st = CheckSettings::default();
    let f = FunctionSpec::monomial("t2", 1.0, 2); // f'' constant
    let mut worst: f64 = 0.0;
    for s in [0.25, 0.5, 0.75] {
        let alpha = 1.0 - s;
        let params = FracParams::new(alpha, 0.0, 1.0).unwrap();
        let inst =
            CheckInstance::new(f.clone(), params, 0.0, Some(1.0), 1.0, Some(2.0)).unwrap();
        for id in [CheckId::T5, CheckId::T6] {
            let out = run_check(id, &inst, Variant::Chain, &st).unwrap();
            assert_eq!(out.status, Status::Holds, "{id} at s={s}");
            worst = worst.max(out.margin.unwrap().abs());
        }
    }
    let ok = worst <= 1e-8;
    report_line(
        6,
        "constant-derivative tightness",
        ok,
        &format!("worst |margin| {worst:.3e}"),
    );
    assert!(ok, "worst margin {worst:.3e}");
}

#[test]
fn criterion_07_stated_dominates_chain() {
    let _g = locked();
    let (report, _) = default_run();
    let mut pairs = 0usize;
    let mut ok = true;
    let mut worst_gap: f64 = f64::INFINITY;
    for id in [CheckId::T3, CheckId::T6] {
        let stated: std::collections::BTreeMap<&str, f64> = report
            .rows
            .iter()
            .filter(|r| r.check_id == id && r.variant == Variant::Stated && r.rhs.is_some())
            .map(|r| (r.instance_id.as_str(), r.rhs.unwrap()))
            .collect();
        for row in &report.rows {
            if row.check_id == id && row.variant == Variant::Chain {
                if let (Some(chain_rhs), Some(&stated_rhs)) =
                    (row.rhs, stated.get(row.instance_id.as_str()))
                {
                    pairs += 1;
                    let gap = stated_rhs - chain_rhs;
                    worst_gap = worst_gap.min(gap);
                    if gap < -1e-9 {
                        ok = false;
                    }
                }
            }
        }
    }
    let ok = ok && pairs > 0;
    report_line(
        7,
        "stated dominates chain (T3, T6)",
        ok,
        &format!("{pairs} pairs, smallest stated-chain gap {worst_gap:.3e}"),
    );
    assert!(ok, "pairs={pairs}, worst gap {worst_gap:.3e}");
}

#[test]
fn criterion_08_remark_comparison_exact() {
    let _g = locked();
    let mut ok = true;
    let mut count = 0;
    for i in 0..10 {
        for j in 0..10 {
            let a = i as f64 * 0.5;
            let b = j as f64 * 0.5;
            let out = remark1_compare(a, b, 2.0).unwrap();
            count += 1;
            // Exact arithmetic: zero tolerance.
            let lhs = out.lhs.unwrap();
            let rhs = out.rhs.unwrap();
            if !(lhs <= rhs && out.margin.unwrap() == rhs - lhs && out.status == Status::Holds) {
                ok = false;
            }
        }
    }
    report_line(8, "remark comparison exact", ok, &format!("{count} grid points"));
    assert!(ok);
}

#[test]
fn criterion_09_determinism_and_witnesses() {
    let _g = locked();
    let (report, _) = default_run();
    let first = render_structured(report);
    let second = render_structured(&run_corpus(&default_config()).unwrap());
    let identical = first == second;

    // Every declared corpus claim passes, so the grid scan produces no
    // false witnesses on the verified corpus...
    let mut claims_ok = true;
    for claim in standard_claims() {
        let f = corpus_standard()
            .into_iter()
            .find(|f| f.label() == claim.label)
            .unwrap();
        let g = claim_quantity(&f, claim.deriv_order, claim.power).unwrap();
        let rep = is_m_convex(&g, claim.m, 2.0, 21).unwrap();
        if !rep.holds {
            claims_ok = false;
        }
    }
    // ...and every witness that is reported re-evaluates as a true violation.
    let mut witness_ok = true;
    for f in corpus_standard() {
        let g = claim_quantity(&f, 0, 1.0).unwrap();
        for m in [0.25, 0.5, 0.75] {
            let rep = is_m_convex(&g, m, 2.0, 9).unwrap();
            if let Some(w) = rep.witness {
                if witness_violation(&g, m, w) <= MCONVEX_TOL {
                    witness_ok = false;
                }
            }
        }
    }

    let ok = identical && claims_ok && witness_ok;
    report_line(
        9,
        "determinism and witness validity",
        ok,
        &format!("bodies identical: {identical}, claims: {claims_ok}, witnesses: {witness_ok}"),
    );
    assert!(ok);
}

#[test]
fn criterion_10_documented_findings() {
    let _g = locked();
    let (report, _) = default_run();

    // Stated T1 rows on non-integer alpha instances are indeterminate with
    // the non-real-power reason.
    let t1_stated: Vec<_> = report
        .rows
        .iter()
        .filter(|r| {
            r.check_id == CheckId::T1
                && r.variant == Variant::Stated
                && r.instance.alpha.fract() != 0.0
                && r.status != Status::PreconditionUnmet
        })
        .collect();
    let t1_flagged = !t1_stated.is_empty()
        && t1_stated.iter().all(|r| {
            r.status == Status::Indeterminate
                && r.note.as_deref().is_some_and(|n| n.contains("(-1)^alpha non-real"))
        });

    // Stated statuses for T2, T5 and C1 are recorded (holds or fails), and
    // none of them affects the exit gate.
    let recorded = |id: CheckId| {
        report
            .rows
            .iter()
            .any(|r| {
                r.check_id == id
                    && r.variant == Variant::Stated
                    && matches!(r.status, Status::Holds | Status::Fails)
            })
    };
    let statuses_recorded = recorded(CheckId::T2) && recorded(CheckId::T5) && recorded(CheckId::C1);

    let has_stated_failures = report.summary.stated_failures > 0;
    let gate = report.gate_passes();

    let ok = t1_flagged && statuses_recorded && has_stated_failures && gate;
    report_line(
        10,
        "documented findings",
        ok,
        &format!(
            "T1 stated flagged: {t1_flagged}, statuses recorded: {statuses_recorded}, \
             stated failures: {} (gate still passes: {gate})",
            report.summary.stated_failures
        ),
    );
    assert!(ok);
}
