//! Numerical laboratory for Caputo and Riemann–Liouville fractional
//! operators, weakly singular quadrature, and inequality margin checks over
//! a corpus of m-convex test functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`] — Gamma/Beta on the positive axis.
//! * [`quadrature`] — adaptive smooth rule plus desingularized endpoint rule.
//! * [`testfuncs`] — exact-derivative function corpus and m-convexity grid
//!   checker.
//! * [`fracops`] — Caputo left/right derivatives, the Riemann–Liouville
//!   fractional integral, and their composition relation.
//! * [`identities`] — residuals of the two fractional-integral equalities the
//!   inequality checks build on.
//! * [`ineqchecks`] — each inequality evaluated in two variants: "stated"
//!   (the displayed form, verbatim) and "chain" (the rigorous intermediate
//!   bound from its proof).
//! * [`harness`] — config parsing, corpus execution, and report rendering.
//!
//! Batch evaluation is data-parallel via rayon when the `parallel` feature
//! (default) is on; results are bit-identical to sequential execution.

// Negated comparisons like !(x > a) are deliberate: they reject NaN along
// with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod parallel;
pub mod specfun;
pub mod quadrature;
pub mod testfuncs;
pub mod fracops;
pub mod identities;
pub mod ineqchecks;
pub mod harness;

pub use error::{Error, Result};
pub use parallel::ExecMode;
