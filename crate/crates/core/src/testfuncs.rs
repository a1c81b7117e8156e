//! Test functions with exact symbolic derivatives of every order, and the
//! m-convexity grid checker.
//!
//! The function algebra is deliberately small — integer monomials, real
//! powers, exponentials, and linear combinations of those — because it is
//! closed under d/dt. Identity residuals need exact f^(n) and f^(n+1), so
//! nothing here ever falls back to numerical differentiation.
//!
//! The grid checker certifies only the sampled grid: it is a sound
//! counterexample finder and a heuristic validator, not a proof of
//! m-convexity.

use crate::error::{Error, Result};
use crate::parallel::{map_indexed, ExecMode};

/// Absolute violation tolerance for the grid checker.
pub const MCONVEX_TOL: f64 = 1e-12;

/// One additive term of a [`FunctionSpec`].
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    /// coef · t^k, integer k ≥ 0.
    Mono { coef: f64, k: u32 },
    /// coef · t^r, real non-integer r (singular at 0 once r goes negative
    /// under differentiation).
    Pow { coef: f64, r: f64 },
    /// coef · e^(lambda·t).
    Exp { coef: f64, lambda: f64 },
}

impl Term {
    fn eval(&self, t: f64) -> f64 {
        match *self {
            Term::Mono { coef, k } => coef * t.powi(k as i32),
            Term::Pow { coef, r } => coef * t.powf(r),
            Term::Exp { coef, lambda } => coef * (lambda * t).exp(),
        }
    }

    fn derivative(&self) -> Option<Term> {
        match *self {
            Term::Mono { coef, k } => {
                if k == 0 {
                    None
                } else {
                    Some(Term::Mono { coef: coef * k as f64, k: k - 1 })
                }
            }
            Term::Pow { coef, r } => Some(Term::Pow { coef: coef * r, r: r - 1.0 }),
            Term::Exp { coef, lambda } => Some(Term::Exp { coef: coef * lambda, lambda }),
        }
    }

    fn describe(&self) -> String {
        match *self {
            Term::Mono { coef, k } => match k {
                0 => format!("{coef}"),
                1 => format!("{coef}*t"),
                _ => format!("{coef}*t^{k}"),
            },
            Term::Pow { coef, r } => format!("{coef}*t^{r}"),
            Term::Exp { coef, lambda } => format!("{coef}*e^({lambda}t)"),
        }
    }
}

/// A test function on [0, ∞) whose derivatives of every admissible order are
/// exactly representable in the same algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    label: String,
    terms: Vec<Term>,
    /// Highest derivative order that stays finite on all of [0, ∞).
    /// `None` means every order is admissible.
    max_order: Option<u32>,
}

impl FunctionSpec {
    pub fn monomial(label: &str, coef: f64, k: u32) -> Self {
        FunctionSpec { label: label.to_string(), terms: vec![Term::Mono { coef, k }], max_order: None }
    }

    /// t^r with real r > 0. Integer r is routed to the monomial form so the
    /// derivative chain terminates exactly.
    pub fn power(label: &str, coef: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("power spec requires r > 0, got {r}")));
        }
        if r.fract() == 0.0 {
            return Ok(Self::monomial(label, coef, r as u32));
        }
        Ok(FunctionSpec {
            label: label.to_string(),
            terms: vec![Term::Pow { coef, r }],
            max_order: Some(r.ceil() as u32),
        })
    }

    pub fn exponential(label: &str, coef: f64, lambda: f64) -> Self {
        FunctionSpec { label: label.to_string(), terms: vec![Term::Exp { coef, lambda }], max_order: None }
    }

    /// Polynomial with nonnegative coefficients, `coeffs[k]` multiplying t^k.
    pub fn polynomial(label: &str, coeffs: &[f64]) -> Result<Self> {
        if coeffs.iter().any(|c| *c < 0.0 || !c.is_finite()) {
            return Err(Error::domain(
                "polynomial spec requires finite nonnegative coefficients".to_string(),
            ));
        }
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| Term::Mono { coef: *c, k: k as u32 })
            .collect();
        Ok(FunctionSpec { label: label.to_string(), terms, max_order: None })
    }

    /// c·f with a fresh label.
    pub fn scaled(label: &str, c: f64, f: &FunctionSpec) -> Self {
        let terms = f
            .terms
            .iter()
            .map(|t| match *t {
                Term::Mono { coef, k } => Term::Mono { coef: c * coef, k },
                Term::Pow { coef, r } => Term::Pow { coef: c * coef, r },
                Term::Exp { coef, lambda } => Term::Exp { coef: c * coef, lambda },
            })
            .collect();
        FunctionSpec { label: label.to_string(), terms, max_order: f.max_order }
    }

    /// Sum of specs; the tightest max_order wins.
    pub fn sum(label: &str, parts: &[FunctionSpec]) -> Self {
        let mut terms = Vec::new();
        let mut max_order = None;
        for p in parts {
            terms.extend(p.terms.iter().cloned());
            max_order = match (max_order, p.max_order) {
                (None, mo) => mo,
                (mo, None) => mo,
                (Some(a), Some(b)) => Some(a.min(b)),
            };
        }
        FunctionSpec { label: label.to_string(), terms, max_order }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn max_order(&self) -> Option<u32> {
        self.max_order
    }

    /// True when the spec is a constant function (possibly zero).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| matches!(t, Term::Mono { k: 0, .. }))
    }

    /// Human-readable rendering of the term sum, for `corpus list`.
    pub fn describe(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms.iter().map(Term::describe).collect::<Vec<_>>().join(" + ")
    }

    /// Evaluate at a point of the domain [0, ∞).
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::domain(format!(
                "{}: evaluation point {t} outside domain [0, inf)",
                self.label
            )));
        }
        let v: f64 = self.terms.iter().map(|term| term.eval(t)).sum();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { point: t })
        }
    }

    /// Exact derivative of the given order, still a `FunctionSpec`.
    pub fn derivative(&self, order: u32) -> Result<FunctionSpec> {
        if let Some(mo) = self.max_order {
            if order > mo {
                return Err(Error::Capability(format!(
                    "{}: derivative order {order} exceeds max_order {mo}",
                    self.label
                )));
            }
        }
        let mut terms = self.terms.clone();
        for _ in 0..order {
            terms = terms.iter().filter_map(Term::derivative).collect();
        }
        Ok(FunctionSpec {
            label: format!("{}_d{}", self.label, order),
            terms,
            max_order: self.max_order.map(|mo| mo - order),
        })
    }

    /// Shift the graph right by `delta`: returns h with h(t) = f(t−delta).
    /// `None` when the spec contains a real-power term (not closed under
    /// translation).
    pub fn translate(&self, delta: f64) -> Option<FunctionSpec> {
        let mut terms = Vec::new();
        for term in &self.terms {
            match *term {
                Term::Pow { .. } => return None,
                Term::Exp { coef, lambda } => {
                    terms.push(Term::Exp { coef: coef * (-lambda * delta).exp(), lambda });
                }
                Term::Mono { coef, k } => {
                    // (t-delta)^k expanded binomially.
                    let mut binom = 1.0;
                    for i in (0..=k).rev() {
                        terms.push(Term::Mono {
                            coef: coef * binom * (-delta).powi((k - i) as i32),
                            k: i,
                        });
                        if i > 0 {
                            binom = binom * i as f64 / (k - i + 1) as f64;
                        }
                    }
                }
            }
        }
        Some(FunctionSpec {
            label: format!("{}_shift{delta}", self.label),
            terms,
            max_order: self.max_order,
        })
    }
}

/// Exact derivative of `f` of the given order, evaluated at `t`.
pub fn eval_deriv(f: &FunctionSpec, order: u32, t: f64) -> Result<f64> {
    f.derivative(order)?.eval(t)
}

/// Outcome of a grid m-convexity check.
#[derive(Clone, Debug, PartialEq)]
pub struct MConvexityReport {
    pub holds: bool,
    /// Violating triple (x, y, t) when the check fails.
    pub witness: Option<(f64, f64, f64)>,
    /// Grid points per axis.
    pub grid_resolution: usize,
    /// Largest observed violation; 0 when the check holds.
    pub max_violation: f64,
}

/// Check g(tx + m(1−t)y) ≤ t·g(x) + m(1−t)·g(y) on the full (x, y, t) grid
/// over x, y in [0, upper], t in [0, 1].
pub fn is_m_convex<G>(g: &G, m: f64, upper: f64, grid: usize) -> Result<MConvexityReport>
where
    G: Fn(f64) -> f64 + Sync,
{
    is_m_convex_mode(g, m, upper, grid, ExecMode::default())
}

pub fn is_m_convex_mode<G>(
    g: &G,
    m: f64,
    upper: f64,
    grid: usize,
    mode: ExecMode,
) -> Result<MConvexityReport>
where
    G: Fn(f64) -> f64 + Sync,
{
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::domain(format!("m must lie in (0,1], got {m}")));
    }
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::domain(format!("region upper bound must be positive, got {upper}")));
    }
    if grid < 3 {
        return Err(Error::domain(format!("grid must be at least 3 per axis, got {grid}")));
    }

    let step = upper / (grid - 1) as f64;
    let tstep = 1.0 / (grid - 1) as f64;
    let xs: Vec<f64> = (0..grid).map(|i| i as f64 * step).collect();
    let ts: Vec<f64> = (0..grid).map(|k| k as f64 * tstep).collect();

    let mut gx = Vec::with_capacity(grid);
    for &x in &xs {
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { point: x });
        }
        gx.push(v);
    }

    // One row per x index; the row scan order (y, then t) fixes which witness
    // is reported, and the index-ordered reduction keeps the result identical
    // across execution modes.
    //
    // The combination point and the bound are both written in lerp form
    // m·y + t·(x − m·y); this keeps the t = 1 corner and the m = 1, x = y
    // diagonal exact in f64, where the true margin is identically zero and a
    // rounded evaluation of t·x + m(1−t)·y would fabricate violations at
    // large function scales.
    let rows = map_indexed(grid, mode, |i| -> Result<(f64, (f64, f64, f64))> {
        let x = xs[i];
        let mut best = f64::NEG_INFINITY;
        let mut at = (x, xs[0], ts[0]);
        for (j, &y) in xs.iter().enumerate() {
            let my = m * y;
            let mgy = m * gx[j];
            for &t in &ts {
                let (p, bound) = if t == 1.0 {
                    (x, gx[i])
                } else if t == 0.0 {
                    (my, mgy)
                } else {
                    (my + t * (x - my), mgy + t * (gx[i] - mgy))
                };
                let gp = g(p);
                if !gp.is_finite() {
                    return Err(Error::NonFinite { point: p });
                }
                let violation = gp - bound;
                if violation > best {
                    best = violation;
                    at = (x, y, t);
                }
            }
        }
        Ok((best, at))
    });

    let mut max_violation = f64::NEG_INFINITY;
    let mut witness = (0.0, 0.0, 0.0);
    for row in rows {
        let (v, at) = row?;
        if v > max_violation {
            max_violation = v;
            witness = at;
        }
    }

    let holds = max_violation <= MCONVEX_TOL;
    Ok(MConvexityReport {
        holds,
        witness: if holds { None } else { Some(witness) },
        grid_resolution: grid,
        max_violation: if holds { 0.0 } else { max_violation },
    })
}

/// Re-evaluate a reported witness; used to confirm there are no false
/// positives coming out of the grid scan.
pub fn witness_violation<G: Fn(f64) -> f64>(g: &G, m: f64, witness: (f64, f64, f64)) -> f64 {
    let (x, y, t) = witness;
    g(t * x + m * (1.0 - t) * y) - (t * g(x) + m * (1.0 - t) * g(y))
}

/// Deterministic, ordered standard corpus.
///
/// Monomials t^1..t^6 cover k in {n, .., n+3} for every tested n in {1,2,3};
/// the exponentials satisfy the positivity hypotheses (f^(n) ≥ 1 on [0, ∞)),
/// and cubic1 = t + t^3/2 has |f''| = 3t, which is m-convex for every
/// m in (0,1].
pub fn corpus_standard() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::monomial("mono1", 1.0, 1),
        FunctionSpec::monomial("mono2", 1.0, 2),
        FunctionSpec::monomial("mono3", 1.0, 3),
        FunctionSpec::monomial("mono4", 1.0, 4),
        FunctionSpec::monomial("mono5", 1.0, 5),
        FunctionSpec::monomial("mono6", 1.0, 6),
        FunctionSpec::exponential("exp1", 1.0, 1.0),
        FunctionSpec::exponential("exp2", 1.0, 2.0),
        FunctionSpec::polynomial("cubic1", &[0.0, 1.0, 0.0, 0.5]).expect("static coefficients"),
    ]
}

/// Look a corpus member up by label.
pub fn corpus_lookup(label: &str) -> Result<FunctionSpec> {
    corpus_standard()
        .into_iter()
        .find(|f| f.label() == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// A self-declared m-convexity property of a corpus member: the quantity
/// |f^(deriv_order)|^power is claimed m-convex on the standard region.
#[derive(Clone, Debug)]
pub struct ConvexityClaim {
    pub label: String,
    pub deriv_order: u32,
    pub power: f64,
    pub m: f64,
}

/// Declared (quantity, m) pairs for every corpus member. Each claim is
/// verified by the grid oracle in the test suite.
pub fn standard_claims() -> Vec<ConvexityClaim> {
    let mut claims = Vec::new();
    let mut push = |label: &str, j: u32, q: f64, m: f64| {
        claims.push(ConvexityClaim { label: label.to_string(), deriv_order: j, power: q, m });
    };

    for k in 1..=6u32 {
        let label = format!("mono{k}");
        for j in 0..=k {
            if k - j >= 1 {
                // |c·t^(k-j)|^q has exponent (k-j)q ≥ 1 and vanishes at 0.
                push(&label, j, 1.0, 1.0);
                push(&label, j, 1.0, 0.5);
                push(&label, j, 2.0, 0.25);
            } else {
                // Positive constants are m-convex only for m = 1.
                push(&label, j, 1.0, 1.0);
            }
        }
    }
    for label in ["exp1", "exp2"] {
        for j in 0..=2u32 {
            push(label, j, 1.0, 1.0);
            push(label, j, 2.0, 1.0);
        }
    }
    // cubic1 = t + t^3/2
    push("cubic1", 0, 1.0, 1.0);
    push("cubic1", 0, 1.0, 0.5); // value 0 at t = 0, convex
    push("cubic1", 1, 1.0, 1.0); // 1.5t^2 + 1 is positive at 0: m = 1 only
    push("cubic1", 2, 1.0, 1.0);
    push("cubic1", 2, 1.0, 0.25); // |3t| vanishes at 0
    push("cubic1", 2, 2.0, 0.5);
    push("cubic1", 3, 1.0, 1.0); // constant 3
    push("cubic1", 4, 1.0, 0.5); // identically zero

    claims
}

/// The claimed quantity |f^(j)|^q as a plain closure over t.
/// Evaluation failures surface as NaN so the grid checker can attach the point.
pub fn claim_quantity(f: &FunctionSpec, deriv_order: u32, power: f64) -> Result<impl Fn(f64) -> f64 + Sync> {
    let d = f.derivative(deriv_order)?;
    Ok(move |t: f64| match d.eval(t) {
        Ok(v) => {
            if power == 1.0 {
                v.abs()
            } else {
                v.abs().powf(power)
            }
        }
        Err(_) => f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn eval_deriv_examples() {
        let f = FunctionSpec::monomial("t3", 1.0, 3);
        assert_eq!(eval_deriv(&f, 2, 1.0).unwrap(), 6.0);

        let g = FunctionSpec::exponential("e2t", 1.0, 2.0);
        assert_eq!(eval_deriv(&g, 3, 0.0).unwrap(), 8.0);

        let p = FunctionSpec::power("p25", 1.0, 2.5).unwrap();
        assert_abs_diff_eq!(eval_deriv(&p, 1, 4.0).unwrap(), 20.0, epsilon = 1e-12);
    }

    #[test]
    fn power_spec_order_limit() {
        let p = FunctionSpec::power("p25", 1.0, 2.5).unwrap();
        assert_eq!(p.max_order(), Some(3));
        assert!(p.derivative(3).is_ok());
        match p.derivative(4) {
            Err(Error::Capability(_)) => {}
            other => panic!("expected capability error, got {other:?}"),
        }
        // Order-3 derivative has exponent -0.5: singular at 0, fine elsewhere.
        assert!(eval_deriv(&p, 3, 0.0).is_err());
        assert!(eval_deriv(&p, 3, 1.0).unwrap().is_finite());
    }

    #[test]
    fn domain_is_nonnegative_halfline() {
        let f = FunctionSpec::monomial("t2", 1.0, 2);
        assert!(f.eval(-0.5).is_err());
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let h = 1e-5;
        for f in corpus_standard() {
            for order in 1..=4u32 {
                for _ in 0..10 {
                    let t: f64 = rng.gen_range(0.1..2.0);
                    let exact = eval_deriv(&f, order, t).unwrap();
                    let lower_order = f.derivative(order - 1).unwrap();
                    let fd = (lower_order.eval(t + h).unwrap() - lower_order.eval(t - h).unwrap())
                        / (2.0 * h);
                    assert!(
                        (exact - fd).abs() <= 1e-6,
                        "{} order {order} at t={t}: exact {exact}, fd {fd}",
                        f.label()
                    );
                }
            }
        }
    }

    #[test]
    fn translate_shifts_the_graph() {
        let f = FunctionSpec::polynomial("c", &[1.0, 0.0, 2.0]).unwrap(); // 1 + 2t^2
        let h = f.translate(0.75).unwrap();
        for &t in &[0.75, 1.0, 1.5, 3.0] {
            assert_abs_diff_eq!(h.eval(t).unwrap(), f.eval(t - 0.75).unwrap(), epsilon = 1e-12);
        }
        let e = FunctionSpec::exponential("e", 2.0, 1.5);
        let he = e.translate(0.3).unwrap();
        assert_abs_diff_eq!(he.eval(1.0).unwrap(), e.eval(0.7).unwrap(), epsilon = 1e-12);
        assert!(FunctionSpec::power("p", 1.0, 2.5).unwrap().translate(1.0).is_none());
    }

    #[test]
    fn identity_function_is_one_convex() {
        let r = is_m_convex(&|x: f64| x, 1.0, 1.0, 11).unwrap();
        assert!(r.holds);
        assert_eq!(r.max_violation, 0.0);
        assert!(r.witness.is_none());
    }

    #[test]
    fn constant_fails_for_m_below_one() {
        // g ≡ 1, m = 0.5: at t = 0 the inequality reads 1 ≤ 0.5.
        let r = is_m_convex(&|_| 1.0, 0.5, 1.0, 11).unwrap();
        assert!(!r.holds);
        let (_, _, t) = r.witness.unwrap();
        assert_eq!(t, 0.0);
        assert!(r.max_violation >= 0.5 - 1e-12);
    }

    #[test]
    fn square_holds_for_half() {
        let r = is_m_convex(&|x: f64| x * x, 0.5, 2.0, 41).unwrap();
        assert!(r.holds, "violation {}", r.max_violation);
    }

    #[test]
    fn checker_rejects_bad_arguments() {
        assert!(is_m_convex(&|x: f64| x, 0.0, 1.0, 11).is_err());
        assert!(is_m_convex(&|x: f64| x, 0.5, -1.0, 11).is_err());
        assert!(is_m_convex(&|x: f64| x, 0.5, 1.0, 2).is_err());
    }

    #[test]
    fn checker_reports_unevaluable_point() {
        let g = |x: f64| if x > 0.5 { f64::NAN } else { x };
        match is_m_convex(&g, 1.0, 1.0, 5) {
            Err(Error::NonFinite { point }) => assert!(point > 0.5),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn corpus_is_deterministic_and_contains_mono2() {
        let a = corpus_standard();
        let b = corpus_standard();
        let la: Vec<_> = a.iter().map(|f| f.label().to_string()).collect();
        let lb: Vec<_> = b.iter().map(|f| f.label().to_string()).collect();
        assert_eq!(la, lb);
        assert!(la.contains(&"mono2".to_string()));
        let m2 = corpus_lookup("mono2").unwrap();
        assert_eq!(m2.eval(3.0).unwrap(), 9.0);
        assert!(corpus_lookup("nope").is_err());
    }

    #[test]
    fn declared_claims_pass_the_grid_oracle() {
        for claim in standard_claims() {
            let f = corpus_lookup(&claim.label).unwrap();
            let g = claim_quantity(&f, claim.deriv_order, claim.power).unwrap();
            let r = is_m_convex(&g, claim.m, 2.0, 21).unwrap();
            assert!(
                r.holds,
                "claim failed: {} |f^({})|^{} m={} violation {:.3e} at {:?}",
                claim.label, claim.deriv_order, claim.power, claim.m, r.max_violation, r.witness
            );
        }
    }

    #[test]
    fn m_monotonicity_on_grounded_convex_quantities() {
        // If the grid holds for m = 1 and g(0) ≤ 0, it holds for smaller m too.
        for (label, j) in [("mono2", 1u32), ("mono3", 1), ("mono4", 2), ("cubic1", 2)] {
            let f = corpus_lookup(label).unwrap();
            let g = claim_quantity(&f, j, 1.0).unwrap();
            assert!(g(0.0) <= 0.0);
            assert!(is_m_convex(&g, 1.0, 2.0, 21).unwrap().holds);
            for m in [0.25, 0.5, 0.75] {
                assert!(
                    is_m_convex(&g, m, 2.0, 21).unwrap().holds,
                    "{label} |f^({j})| failed at m={m}"
                );
            }
        }
    }

    #[test]
    #[allow(clippy::type_complexity)]
    fn witnesses_reevaluate_as_true_violations() {
        let cases: Vec<(Box<dyn Fn(f64) -> f64 + Sync>, f64)> = vec![
            (Box::new(|_| 1.0), 0.5),
            (Box::new(|x: f64| x.exp()), 0.5),
            (Box::new(|_| 2.0), 0.75),
        ];
        for (g, m) in &cases {
            let r = is_m_convex(g, *m, 1.5, 9).unwrap();
            assert!(!r.holds);
            let v = witness_violation(g, *m, r.witness.unwrap());
            assert!(v > MCONVEX_TOL, "witness does not violate: {v}");
        }
    }
}
