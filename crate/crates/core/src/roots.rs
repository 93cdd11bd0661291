//! Safeguarded Newton iteration for monotone scalar functions.

use crate::error::{Error, Result};

/// Solves `f(x) = target` on `[lo, hi]` for a monotone `f` with derivative
/// `df`. Newton steps that leave the current bracket fall back to bisection.
pub fn invert_monotone<F, D>(f: F, df: D, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let g = |x: f64| f(x) - target;
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::RootFinding(format!(
            "target {target} not bracketed by [{lo}, {hi}]"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx.abs() <= tol {
            return Ok(x);
        }
        if gx.signum() == g_lo.signum() {
            lo = x;
            g_lo = gx;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - gx / d;
        x = if d != 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * x.abs().max(1e-300) {
            return Ok(x);
        }
    }
    Err(Error::RootFinding(format!(
        "no convergence to tolerance {tol:e} for target {target}"
    )))
}

/// Bisection for a sign change of `g` on `[lo, hi]`, down to a bracket
/// width of a few ulps.
pub fn bisect_sign_change<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = g(lo).signum();
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if g(m).signum() == s_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}
