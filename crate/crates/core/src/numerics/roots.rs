//! Bracketed root finding.

use crate::{Error, Result};

/// Root of `g` in `[a, b]` by bisection; requires a sign change.
/// On success `|g(root)| < tol` and the final bracket is narrower than `tol`.
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(mut g: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let (mut ga, gb) = (g(a), g(b));
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if !(ga.signum() != gb.signum()) || ga.is_nan() || gb.is_nan() {
        return Err(Error::InvalidBracket { a, b, ga, gb });
    }
    loop {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return Ok(m);
        }
        if (b - a) < tol && gm.abs() < tol {
            return Ok(m);
        }
        if m <= a || m >= b {
            // Bracket cannot shrink further.
            return if gm.abs() < tol {
                Ok(m)
            } else {
                Err(Error::NotConverged {
                    estimate: m,
                    error: gm.abs(),
                })
            };
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
}

/// Locates a sign change of `s` in `[a, b]` to bracket width `xtol`. Only the
/// sign of `s` is used, so `s` may be badly scaled.
pub fn bisect_sign_change<F: FnMut(f64) -> f64>(mut s: F, a: f64, b: f64, xtol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let sa = s(a).signum();
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if s(m).signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
