//! Numerical verification of the two fractional-integral equalities the
//! inequality checks build on.
//!
//! The first equality relates the endpoint average of f^(n) to the pair of
//! Caputo derivatives taken across the whole interval; its right side is the
//! weighted integral of f^(n+1) along the chord. The second is the one-sided
//! companion over [x, y]. Both sides are computed by independent quadrature
//! routes, and the residual |lhs − rhs| is the verification artifact.

use crate::error::{Error, Result};
use serde::Serialize;
use crate::fracops::{caputo_left, caputo_right, FracMode, FracParams};
use crate::quadrature::integrate_smooth;
use crate::specfun::gamma_fn;
use crate::testfuncs::FunctionSpec;

/// Two sides of an identity, their gap, and the error the quadrature layer
/// admits to.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub est_error: f64,
}

/// Quadrature tolerances used by the residual computations.
#[derive(Clone, Copy, Debug)]
pub struct ResidualTol {
    /// Tolerance for the Caputo operator evaluations inside the left side.
    pub operator: f64,
    /// Tolerance for the chord integral on the right side.
    pub quadrature: f64,
}

impl Default for ResidualTol {
    fn default() -> Self {
        ResidualTol { operator: 1e-11, quadrature: 1e-10 }
    }
}

/// Left side of the first identity (the trapezoid gap, called K in the
/// bound checks), plus an error allowance.
pub fn lemma1_lhs(f: &FunctionSpec, params: &FracParams, operator_tol: f64) -> Result<(f64, f64)> {
    if params.mode != FracMode::Fractional {
        return Err(Error::domain("identity requires non-integer alpha".to_string()));
    }
    let dn = f.derivative(params.n)?;
    let avg = 0.5 * (dn.eval(params.a)? + dn.eval(params.b)?);
    let cl = caputo_left(f, params, params.b, operator_tol)?;
    let cr = caputo_right(f, params, params.a, operator_tol)?;
    let coeff = gamma_fn(params.s + 1.0)? / (2.0 * params.width().powf(params.s));
    let lhs = avg - coeff * (cl + params.sign() * cr);
    Ok((lhs, coeff * 2.0 * operator_tol))
}

/// Residual of the first identity over [a, b].
pub fn lemma1_residual(
    f: &FunctionSpec,
    params: &FracParams,
    tol: &ResidualTol,
) -> Result<IdentityResidual> {
    let (lhs, lhs_err) = lemma1_lhs(f, params, tol.operator)?;

    let dn1 = f.derivative(params.n + 1)?;
    let (a, b, s) = (params.a, params.b, params.s);
    let integrand = move |t: f64| {
        let w = (1.0 - t).powf(s) - t.powf(s);
        let point = (t * a + (1.0 - t) * b).max(0.0);
        w * dn1.eval(point).unwrap_or(f64::NAN)
    };
    let q = integrate_smooth(integrand, 0.0, 1.0, tol.quadrature)?;
    let rhs = 0.5 * params.width() * q.value;

    Ok(IdentityResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        est_error: lhs_err + 0.5 * params.width() * q.abs_error_estimate,
    })
}

/// Left side of the second identity over [x, y] (the operator's interval is
/// [x, y], evaluated at x).
pub fn lemma2_lhs(
    f: &FunctionSpec,
    params: &FracParams,
    x: f64,
    y: f64,
    operator_tol: f64,
) -> Result<(f64, f64)> {
    if params.mode != FracMode::Fractional {
        return Err(Error::domain("identity requires non-integer alpha".to_string()));
    }
    if !(params.a <= x && x < y && y <= params.b) {
        return Err(Error::domain(format!(
            "identity requires a <= x < y <= b, got x={x}, y={y} in [{}, {}]",
            params.a, params.b
        )));
    }
    let sub = FracParams::new(params.alpha, x, y)?;
    let dn = f.derivative(params.n)?;
    let cr = caputo_right(f, &sub, x, operator_tol)?;
    let coeff = gamma_fn(params.s + 1.0)? / (y - x).powf(params.s + 1.0);
    let lhs = dn.eval(y)? / (y - x) - params.sign() * coeff * cr;
    Ok((lhs, coeff * operator_tol))
}

/// Residual of the second identity on a ≤ x < y ≤ b.
pub fn lemma2_residual(
    f: &FunctionSpec,
    params: &FracParams,
    x: f64,
    y: f64,
    tol: &ResidualTol,
) -> Result<IdentityResidual> {
    let (lhs, lhs_err) = lemma2_lhs(f, params, x, y, tol.operator)?;

    let dn1 = f.derivative(params.n + 1)?;
    let s = params.s;
    let integrand = move |t: f64| {
        let point = (t * x + (1.0 - t) * y).max(0.0);
        (1.0 - t).powf(s) * dn1.eval(point).unwrap_or(f64::NAN)
    };
    let q = integrate_smooth(integrand, 0.0, 1.0, tol.quadrature)?;

    Ok(IdentityResidual {
        lhs,
        rhs: q.value,
        residual: (lhs - q.value).abs(),
        est_error: lhs_err + q.abs_error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfuncs::FunctionSpec;

    fn tols() -> ResidualTol {
        ResidualTol::default()
    }

    #[test]
    fn lemma1_constant_second_derivative_vanishes() {
        // f = t^2, n = 1: f'' constant, both sides are exactly zero.
        let f = FunctionSpec::monomial("t2", 1.0, 2);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r = lemma1_residual(&f, &p, &tols()).unwrap();
        assert!(r.lhs.abs() <= 1e-9, "lhs = {}", r.lhs);
        assert!(r.rhs.abs() <= 1e-9, "rhs = {}", r.rhs);
        assert!(r.residual <= 1e-9);
    }

    #[test]
    fn lemma1_cubic_and_quartic() {
        let f = FunctionSpec::monomial("t3", 1.0, 3);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r = lemma1_residual(&f, &p, &tols()).unwrap();
        assert!(r.residual <= 1e-6, "residual = {}", r.residual);
        // Known closed form for this instance: lhs = 0.4.
        assert!((r.lhs - 0.4).abs() <= 1e-9, "lhs = {}", r.lhs);

        let f = FunctionSpec::monomial("t4", 1.0, 4);
        let p = FracParams::new(1.5, 0.0, 1.0).unwrap();
        let r = lemma1_residual(&f, &p, &tols()).unwrap();
        assert!(r.residual <= 1e-6, "residual = {}", r.residual);
    }

    #[test]
    fn lemma1_rejects_integer_alpha() {
        let f = FunctionSpec::monomial("t3", 1.0, 3);
        let p = FracParams::new(1.0, 0.0, 1.0).unwrap();
        assert!(lemma1_residual(&f, &p, &tols()).is_err());
    }

    #[test]
    fn lemma2_constant_second_derivative_closed_form() {
        // f'' ≡ 2: both sides equal 2/(s+1) = 4/3 at s = 1/2.
        let f = FunctionSpec::monomial("t2", 1.0, 2);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r = lemma2_residual(&f, &p, 0.0, 1.0, &tols()).unwrap();
        assert!((r.lhs - 4.0 / 3.0).abs() <= 1e-9, "lhs = {}", r.lhs);
        assert!((r.rhs - 4.0 / 3.0).abs() <= 1e-9, "rhs = {}", r.rhs);
        assert!(r.residual <= 1e-9);
    }

    #[test]
    fn lemma2_generic_instances() {
        let f = FunctionSpec::monomial("t3", 1.0, 3);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r = lemma2_residual(&f, &p, 0.2, 0.9, &tols()).unwrap();
        assert!(r.residual <= 1e-6, "residual = {}", r.residual);

        let f = FunctionSpec::exponential("e", 1.0, 1.0);
        let p = FracParams::new(0.75, 0.0, 1.0).unwrap();
        let r = lemma2_residual(&f, &p, 0.0, 1.0, &tols()).unwrap();
        assert!(r.residual <= 1e-6, "residual = {}", r.residual);
    }

    #[test]
    fn lemma2_rejects_bad_points() {
        let f = FunctionSpec::monomial("t3", 1.0, 3);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        assert!(lemma2_residual(&f, &p, 0.9, 0.2, &tols()).is_err());
        assert!(lemma2_residual(&f, &p, 0.5, 0.5, &tols()).is_err());
    }

    #[test]
    fn scale_covariance() {
        let base = FunctionSpec::monomial("t3", 1.0, 3);
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r1 = lemma1_residual(&base, &p, &tols()).unwrap();
        for c in [2.0, 10.0] {
            let scaled = FunctionSpec::scaled("ct3", c, &base);
            let rc = lemma1_residual(&scaled, &p, &tols()).unwrap();
            assert!((rc.lhs - c * r1.lhs).abs() <= c * 1e-8);
            assert!((rc.rhs - c * r1.rhs).abs() <= c * 1e-8);
            assert!(rc.residual <= c * 1e-6);
        }
    }

    #[test]
    fn interval_translation_invariance() {
        // Shifting f and [a, b] together leaves both sides unchanged.
        let f = FunctionSpec::polynomial("poly", &[0.0, 1.0, 0.0, 0.5]).unwrap();
        let p = FracParams::new(0.5, 0.0, 1.0).unwrap();
        let r0 = lemma1_residual(&f, &p, &tols()).unwrap();
        for delta in [0.5, 2.0] {
            let shifted = f.translate(delta).unwrap();
            let ps = FracParams::new(0.5, delta, 1.0 + delta).unwrap();
            let rs = lemma1_residual(&shifted, &ps, &tols()).unwrap();
            assert!(
                (rs.lhs - r0.lhs).abs() <= 1e-8 && (rs.rhs - r0.rhs).abs() <= 1e-8,
                "delta={delta}: ({}, {}) vs ({}, {})",
                rs.lhs,
                rs.rhs,
                r0.lhs,
                r0.rhs
            );
        }
    }
}
