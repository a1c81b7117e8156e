//! Numerical integration.
//!
//! Two entry points cover everything the operators need:
//!
//! * [`integrate_smooth`] — adaptive quadrature for integrands that are
//!   continuous on the closed panel (endpoint kinks included). A nested
//!   Gauss–Kronrod 7/15 pair supplies the value and the error estimate;
//!   the panel with the worst estimate is split at its midpoint until the
//!   summed estimate meets the tolerance.
//! * [`integrate_weighted_endpoint`] — weakly singular kernels
//!   (distance to endpoint)^(s−1) with s in (0,1). The power substitution
//!   u = (distance)^s turns the weighted integral into a smooth one, which
//!   is then handed to `integrate_smooth`. This works for every s in (0,1)
//!   without node tables.
//!
//! Panels are summed strictly left-to-right after refinement, so the result
//! does not depend on refinement order and reruns are bit-identical.

use crate::error::{Error, Result};
use crate::specfun::beta_fn;

/// Integral value with an error estimate and the node count spent on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub nodes_used: usize,
}

/// Which end of the interval carries the algebraic singularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularEnd {
    Lower,
    Upper,
}

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
/// Odd indices are the embedded 7-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const MAX_DEPTH: u32 = 60;
const MAX_PANELS: usize = 4096;

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    resabs: f64,
    depth: u32,
}

/// One Gauss–Kronrod 7/15 evaluation.
/// Returns (K15 value, |K15 − G7|, K15 applied to |g|).
fn qk15<G: Fn(f64) -> f64>(g: &G, lo: f64, hi: f64) -> Result<(f64, f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let eval = |t: f64| -> Result<f64> {
        let v = g(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { point: t })
        }
    };

    let f_center = eval(center)?;
    let mut kronrod = f_center * WGK[7];
    let mut resabs = f_center.abs() * WGK[7];
    let mut gauss = 0.0;

    for (j, wg) in WG.iter().enumerate().take(3) {
        let jtw = j * 2 + 1;
        let dx = half * XGK[jtw];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        gauss += wg * (f1 + f2);
        kronrod += WGK[jtw] * (f1 + f2);
        resabs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    gauss += WG[3] * f_center;

    for j in 0..4 {
        let jtwm1 = j * 2;
        let dx = half * XGK[jtwm1];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += WGK[jtwm1] * (f1 + f2);
        resabs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    Ok((kronrod * half, ((kronrod - gauss) * half).abs(), resabs * half.abs()))
}

/// Adaptive integral of `g` over [lo, hi] with absolute tolerance `tol`.
///
/// `g` must be finite on the closed interval; a non-finite evaluation aborts
/// with the offending point. Exhausting the subdivision budget (depth 60 or
/// 4096 panels) before the summed error estimate drops below `tol` is a
/// convergence error.
pub fn integrate_smooth<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<QuadEstimate> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::domain(format!(
            "integrate_smooth requires lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if lo == hi {
        let v = g(lo);
        if !v.is_finite() {
            return Err(Error::NonFinite { point: lo });
        }
        return Ok(QuadEstimate { value: 0.0, abs_error_estimate: 0.0, nodes_used: 1 });
    }

    let mut nodes = 15usize;
    let (v0, e0, a0) = qk15(&g, lo, hi)?;
    let mut panels = vec![Panel { lo, hi, value: v0, err: e0, resabs: a0, depth: 0 }];

    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol {
            break;
        }

        // Split the splittable panel with the worst estimate; ties go to the
        // leftmost so refinement order is reproducible.
        let mut pick: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.depth >= MAX_DEPTH {
                continue;
            }
            match pick {
                None => pick = Some(i),
                Some(j) => {
                    let best = &panels[j];
                    if p.err > best.err || (p.err == best.err && p.lo < best.lo) {
                        pick = Some(i);
                    }
                }
            }
        }
        let Some(i) = pick else {
            return Err(Error::Convergence(format!(
                "max depth {MAX_DEPTH} reached with error estimate {total_err:.3e} > tol {tol:.3e}"
            )));
        };
        if panels.len() >= MAX_PANELS {
            return Err(Error::Convergence(format!(
                "panel budget {MAX_PANELS} exhausted with error estimate {total_err:.3e} > tol {tol:.3e}"
            )));
        }

        let parent = panels[i];
        let mid = 0.5 * (parent.lo + parent.hi);
        if mid <= parent.lo || mid >= parent.hi {
            // Interval narrower than f64 spacing; treat as converged.
            return Err(Error::Convergence(format!(
                "panel [{}, {}] not splittable at f64 resolution",
                parent.lo, parent.hi
            )));
        }
        let (lv, le, la) = qk15(&g, parent.lo, mid)?;
        let (rv, re, ra) = qk15(&g, mid, parent.hi)?;
        nodes += 30;
        panels[i] = Panel {
            lo: parent.lo,
            hi: mid,
            value: lv,
            err: le,
            resabs: la,
            depth: parent.depth + 1,
        };
        panels.push(Panel {
            lo: mid,
            hi: parent.hi,
            value: rv,
            err: re,
            resabs: ra,
            depth: parent.depth + 1,
        });
    }

    // Fixed summation order: left to right.
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut value = 0.0;
    let mut err = 0.0;
    let mut resabs = 0.0;
    for p in &panels {
        value += p.value;
        err += p.err;
        resabs += p.resabs;
    }
    // The rule-difference estimate underflows below f64 rounding on deeply
    // refined panels; floor it at the accumulated roundoff level so the
    // reported estimate stays trustworthy.
    let err = err.max(50.0 * f64::EPSILON * resabs);
    Ok(QuadEstimate { value, abs_error_estimate: err, nodes_used: nodes })
}

/// Integral of w(t)·g(t) over [lo, hi] where w(t) = (distance to the singular
/// end)^(s−1), s in (0, 1), and g is smooth on the closed interval.
///
/// Callers handle s = 1 themselves as a plain unweighted integral.
pub fn integrate_weighted_endpoint<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    hi: f64,
    s: f64,
    singular_end: SingularEnd,
    tol: f64,
) -> Result<QuadEstimate> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!(
            "integrate_weighted_endpoint requires s in (0,1), got {s}"
        )));
    }
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::domain(format!(
            "integrate_weighted_endpoint requires lo <= hi, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(QuadEstimate { value: 0.0, abs_error_estimate: 0.0, nodes_used: 1 });
    }

    let width = hi - lo;
    let upper_u = width.powf(s);
    let inv_s = 1.0 / s;

    // u = (distance)^s maps the weighted integral to (1/s) ∫ g(t(u)) du.
    // powf round-trip can land a hair outside [lo, hi]; clamp before calling g.
    let transformed = |u: f64| -> f64 {
        let dist = u.powf(inv_s);
        let t = match singular_end {
            SingularEnd::Upper => (hi - dist).max(lo),
            SingularEnd::Lower => (lo + dist).min(hi),
        };
        g(t)
    };

    let inner = integrate_smooth(transformed, 0.0, upper_u, tol * s)?;
    Ok(QuadEstimate {
        value: inner.value * inv_s,
        abs_error_estimate: inner.abs_error_estimate * inv_s,
        nodes_used: inner.nodes_used,
    })
}

/// Closed form for the kernel moment ∫ₐˣ (x−t)^(s−1) (t−a)^k dt
/// = (x−a)^(s+k) β(k+1, s). Valid for s in (0, 1].
pub fn kernel_moment(a: f64, x: f64, s: f64, k: u32) -> Result<f64> {
    if !(a < x) {
        return Err(Error::domain(format!("kernel_moment requires a < x, got a={a}, x={x}")));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("kernel_moment requires s in (0,1], got {s}")));
    }
    Ok((x - a).powf(s + k as f64) * beta_fn(k as f64 + 1.0, s)?)
}
