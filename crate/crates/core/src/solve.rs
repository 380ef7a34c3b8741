use crate::error::{CoreError, Result};

/// Bisection on a bracketing interval. Requires f(lo) and f(hi) of opposite
/// sign; returns the midpoint once the bracket or |f| is below `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(CoreError::NoRootFound { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 || (hi - lo) < tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan [lo, hi] in n steps for the first sign change, then bisect inside it.
pub fn scan_and_bisect<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    n: usize,
    tol: f64,
) -> Result<f64> {
    let step = (hi - lo) / n as f64;
    let mut x = lo;
    let mut fx = f(x);
    for _ in 0..n {
        let y = x + step;
        let fy = f(y);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() != fy.signum() {
            return bisect(&f, x, y, tol);
        }
        x = y;
        fx = fy;
    }
    Err(CoreError::NoRootFound { lo, hi })
}

/// Symmetric-difference derivative with step h.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Symmetric second difference with step h.
pub fn central_diff2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}
