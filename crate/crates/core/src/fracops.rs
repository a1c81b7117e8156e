//! Caputo left/right fractional derivatives, the Riemann–Liouville fractional
//! integral, the relation that composes them, and the integer/zero-order
//! reduction modes.
//!
//! For non-integer α with n = ⌊α⌋+1 and s = n−α:
//!
//! * left:  (1/Γ(s)) ∫ₐˣ (x−t)^(s−1) f^(n)(t) dt
//! * right: ((−1)^n/Γ(s)) ∫ₓᵇ (t−x)^(s−1) f^(n)(t) dt
//!
//! α = 0 and integer α ≥ 1 are handled as explicit reduction modes rather
//! than limits: α = 0 integrates f' (so the value is f(x) − f(a), not f(x)),
//! integer α returns (±1)^α · f^(α)(x).

use crate::error::{Error, Result};
use crate::quadrature::{integrate_smooth, integrate_weighted_endpoint, SingularEnd};
use crate::specfun::gamma_fn;
use crate::testfuncs::FunctionSpec;

/// Default absolute quadrature tolerance for operator evaluation. Downstream
/// residual contracts at 1e-9 then hold with two orders of margin.
pub const OPERATOR_TOL: f64 = 1e-11;

/// How the order parameter is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracMode {
    /// Non-integer α: weakly singular kernel of exponent s−1.
    Fractional,
    /// α = 0: n = 1, s = 1, plain integral of f'.
    ZeroOrder,
    /// Integer α ≥ 1: the operator collapses to (±1)^α f^(α).
    IntegerOrder,
}

/// Fractional order α with the derived quantities n = ⌊α⌋+1 and s = n−α,
/// over an ordered interval [a, b].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracParams {
    pub alpha: f64,
    pub n: u32,
    pub s: f64,
    pub a: f64,
    pub b: f64,
    pub mode: FracMode,
}

impl FracParams {
    pub fn new(alpha: f64, a: f64, b: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::domain(format!("alpha must be >= 0, got {alpha}")));
        }
        if !a.is_finite() || !b.is_finite() || !(a < b) {
            return Err(Error::domain(format!("interval must satisfy a < b, got [{a}, {b}]")));
        }
        let (n, s, mode) = if alpha == 0.0 {
            (1, 1.0, FracMode::ZeroOrder)
        } else if alpha.fract() == 0.0 {
            (alpha as u32, 0.0, FracMode::IntegerOrder)
        } else {
            let n = alpha.floor() as u32 + 1;
            (n, n as f64 - alpha, FracMode::Fractional)
        };
        Ok(FracParams { alpha, n, s, a, b, mode })
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// (−1)^n as a real factor.
    pub fn sign(&self) -> f64 {
        if self.n.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

fn nan_on_error(d: &FunctionSpec) -> impl Fn(f64) -> f64 + '_ {
    move |t| d.eval(t).unwrap_or(f64::NAN)
}

/// Left-sided Caputo derivative of order α at x, over [a, x].
pub fn caputo_left(f: &FunctionSpec, params: &FracParams, x: f64, tol: f64) -> Result<f64> {
    if !(x > params.a) {
        return Err(Error::domain(format!(
            "caputo_left requires x > a, got x={x}, a={}",
            params.a
        )));
    }
    if x > params.b {
        return Err(Error::domain(format!(
            "caputo_left requires x <= b, got x={x}, b={}",
            params.b
        )));
    }
    match params.mode {
        FracMode::Fractional => {
            let dn = f.derivative(params.n)?;
            let gs = gamma_fn(params.s)?;
            let w = integrate_weighted_endpoint(
                nan_on_error(&dn),
                params.a,
                x,
                params.s,
                SingularEnd::Upper,
                tol * gs,
            )?;
            Ok(w.value / gs)
        }
        FracMode::ZeroOrder => {
            let d1 = f.derivative(1)?;
            Ok(integrate_smooth(nan_on_error(&d1), params.a, x, tol)?.value)
        }
        FracMode::IntegerOrder => f.derivative(params.n)?.eval(x),
    }
}

/// Right-sided Caputo derivative of order α at x, over [x, b].
pub fn caputo_right(f: &FunctionSpec, params: &FracParams, x: f64, tol: f64) -> Result<f64> {
    if !(x < params.b) {
        return Err(Error::domain(format!(
            "caputo_right requires x < b, got x={x}, b={}",
            params.b
        )));
    }
    if x < params.a {
        return Err(Error::domain(format!(
            "caputo_right requires x >= a, got x={x}, a={}",
            params.a
        )));
    }
    match params.mode {
        FracMode::Fractional => {
            let dn = f.derivative(params.n)?;
            let gs = gamma_fn(params.s)?;
            let w = integrate_weighted_endpoint(
                nan_on_error(&dn),
                x,
                params.b,
                params.s,
                SingularEnd::Lower,
                tol * gs,
            )?;
            Ok(params.sign() * w.value / gs)
        }
        FracMode::ZeroOrder => {
            let d1 = f.derivative(1)?;
            Ok(-integrate_smooth(nan_on_error(&d1), x, params.b, tol)?.value)
        }
        FracMode::IntegerOrder => Ok(params.sign() * f.derivative(params.n)?.eval(x)?),
    }
}

/// Which side the Riemann–Liouville integral runs over, with its anchor
/// endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RlSide {
    /// ∫ from the anchor a up to x (requires x > a).
    LeftFrom(f64),
    /// ∫ from x up to the anchor b (requires x < b).
    RightFrom(f64),
}

/// Riemann–Liouville fractional integral of order σ in (0, 1] applied to a
/// plain function handle.
pub fn rl_integral<G: Fn(f64) -> f64>(
    g: G,
    sigma: f64,
    side: RlSide,
    x: f64,
    tol: f64,
) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::domain(format!("rl_integral requires sigma in (0,1], got {sigma}")));
    }
    let (lo, hi, end) = match side {
        RlSide::LeftFrom(a) => {
            if !(x > a) {
                return Err(Error::domain(format!(
                    "rl_integral left side requires x > a, got x={x}, a={a}"
                )));
            }
            (a, x, SingularEnd::Upper)
        }
        RlSide::RightFrom(b) => {
            if !(x < b) {
                return Err(Error::domain(format!(
                    "rl_integral right side requires x < b, got x={x}, b={b}"
                )));
            }
            (x, b, SingularEnd::Lower)
        }
    };
    if sigma == 1.0 {
        // Kernel power 0: plain integral, Γ(1) = 1.
        return Ok(integrate_smooth(g, lo, hi, tol)?.value);
    }
    let gs = gamma_fn(sigma)?;
    let w = integrate_weighted_endpoint(g, lo, hi, sigma, end, tol * gs)?;
    Ok(w.value / gs)
}

/// Residual of the composition relation: the Caputo derivative must equal the
/// order-s Riemann–Liouville integral of f^(n) (with the (−1)^n factor on the
/// right side).
pub fn verify_caputo_rl_relation(
    f: &FunctionSpec,
    params: &FracParams,
    x: f64,
    tol: f64,
) -> Result<f64> {
    if params.mode != FracMode::Fractional {
        return Err(Error::domain(
            "relation check requires non-integer alpha".to_string(),
        ));
    }
    if !(params.a < x && x < params.b) {
        return Err(Error::domain(format!(
            "relation check requires a < x < b, got x={x} in [{}, {}]",
            params.a, params.b
        )));
    }
    let dn = f.derivative(params.n)?;

    let cl = caputo_left(f, params, x, tol)?;
    let rl_left = rl_integral(nan_on_error(&dn), params.s, RlSide::LeftFrom(params.a), x, tol)?;

    let cr = caputo_right(f, params, x, tol)?;
    let rl_right = rl_integral(nan_on_error(&dn), params.s, RlSide::RightFrom(params.b), x, tol)?;

    Ok((cl - rl_left).abs() + (cr - params.sign() * rl_right).abs())
}
