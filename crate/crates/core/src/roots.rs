//! Scalar root-finding helpers: bracketed bisection with an optional Newton
//! polish, and outward bracket expansion.
//!
//! All solvers in this crate reduce their nonlinear equations to monotone (or
//! at least sign-changing) scalar problems, so a guarded bisection is the
//! workhorse; Newton steps are only taken inside an established bracket.

use crate::error::{Error, Result};

/// Absolute tolerance to which bisection narrows the bracket.
pub const BISECT_TOL: f64 = 1e-13;

/// Maximum bisection iterations (enough to exhaust f64 resolution on any
/// bracket the solvers produce).
const MAX_BISECT: usize = 200;

/// Find a root of `f` inside `[a, b]`, assuming `f(a)` and `f(b)` have
/// opposite signs (endpoints with zero value are accepted as roots).
///
/// Bisection narrows the bracket below [`BISECT_TOL`] (scaled by the bracket
/// magnitude); if `df` is provided, a few Newton steps polish the result
/// without ever leaving the bracket.
pub fn bisect(f: &dyn Fn(f64) -> f64, a: f64, b: f64, df: Option<&dyn Fn(f64) -> f64>) -> Result<f64> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numerics(format!(
            "bisect: no sign change on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECT {
        mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break; // bracket exhausted at f64 resolution
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        if hi - lo < BISECT_TOL * (1.0 + mid.abs()) {
            break;
        }
    }
    let _ = fhi;
    // Optional Newton polish, constrained to the remaining bracket.
    if let Some(df) = df {
        let mut x = 0.5 * (lo + hi);
        for _ in 0..4 {
            let fx = f(x);
            if fx == 0.0 {
                break;
            }
            let d = df(x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = fx / d;
            let x_new = x - step;
            if !(lo..=hi).contains(&x_new) {
                break;
            }
            x = x_new;
            if step.abs() < 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        return Ok(x);
    }
    Ok(mid)
}

/// Expand a bracket geometrically to the right of `a` until `f` changes sign.
///
/// Returns `(lo, hi)` with a sign change between them. `scale` sets the
/// initial step; the step grows by a factor of 2 up to `max_iter` times.
pub fn expand_right(f: &dyn Fn(f64) -> f64, a: f64, scale: f64, max_iter: usize) -> Result<(f64, f64)> {
    let fa = f(a);
    let mut step = scale;
    let mut lo = a;
    let mut flo = fa;
    for _ in 0..max_iter {
        let hi = lo + step;
        let fhi = f(hi);
        if fhi == 0.0 || fhi.signum() != flo.signum() {
            return Ok((lo, hi));
        }
        lo = hi;
        flo = fhi;
        step *= 2.0;
    }
    Err(Error::Numerics(format!(
        "expand_right: no sign change found beyond {a}"
    )))
}

/// Expand a bracket geometrically to the left of `b`, stopping at the hard
/// lower wall `wall` (approached but never crossed), until `f` changes sign.
pub fn expand_left_towards(f: &dyn Fn(f64) -> f64, b: f64, wall: f64, max_iter: usize) -> Result<(f64, f64)> {
    let fb = f(b);
    let mut hi = b;
    let mut fhi = fb;
    let mut frac = 0.5;
    for _ in 0..max_iter {
        let lo = wall + frac * (hi - wall);
        let flo = f(lo);
        if flo == 0.0 || flo.signum() != fhi.signum() {
            return Ok((lo, hi));
        }
        hi = lo;
        fhi = flo;
        frac = 0.5;
    }
    Err(Error::Numerics(format!(
        "expand_left_towards: no sign change between {wall} and {b}"
    )))
}
