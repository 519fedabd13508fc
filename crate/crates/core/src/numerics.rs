//! Derivative-free one-dimensional solvers.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// The bracket shrinks until it is narrower than `tol`, or until it can no
/// longer shrink in floating point. Near a smooth maximum `f` is flat to
/// `O(sqrt(eps))` in `x`, so the location is only that accurate even though
/// the value is good to machine precision.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<Extremum>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tol {
        if iterations == max_iter {
            return Err(Error::NoConvergence {
                what: "golden-section search",
                iterations,
            });
        }
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if !(c > a && d < b && c <= d) {
            break;
        }
    }
    let (x, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(Extremum { x, value, iterations })
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops when the bracket is narrower than `tol` or when its midpoint is no
/// longer representable between the endpoints.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(Root { x: a, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, iterations: 0 });
    }
    if fa.is_nan() || fb.is_nan() || (fa > 0.0) == (fb > 0.0) {
        return Err(Error::Domain(format!(
            "bisection bracket [{lo}, {hi}] does not straddle a root (f = {fa}, {fb})"
        )));
    }
    let mut iterations = 0;
    while (b - a).abs() > tol {
        if iterations == max_iter {
            return Err(Error::NoConvergence {
                what: "bisection",
                iterations,
            });
        }
        iterations += 1;
        let m = a + 0.5 * (b - a);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(Root { x: m, iterations });
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Root {
        x: a + 0.5 * (b - a),
        iterations,
    })
}
