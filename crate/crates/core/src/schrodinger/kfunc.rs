//! The spectral function `k(z)` and `Q(z)`.
//!
//! `k(z) = (4√2/π)∫₀^∞ y²(1+zy²)/((y²−z)(y⁴+1)) dy` tends to 2 as `z → 0⁻`.
//! Evaluating `2⟨((1+zA)/(A−z))e₊₊, (αI−βR_ω)e₊₊⟩` with the Friedrichs
//! resolvent gives `Q(z) = α_θ·k(z)/2`, and it is this `Q` that enters the
//! bound-state equation and the resolvent formula.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::defect::CParams;
use crate::numerics::integrate_improper;
use crate::{Error, Result, C64};

fn check_z(z: f64) -> Result<()> {
    if !(z < 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("k(z) needs finite z < 0, got {z}")));
    }
    Ok(())
}

/// `k(z)` by adaptive quadrature, absolute accuracy `tol`.
pub fn k_integral(z: f64, tol: f64) -> Result<f64> {
    check_z(z)?;
    let pref = 4.0 * SQRT_2 / PI;
    let f = |y: f64| {
        let y2 = y * y;
        y2 * (1.0 + z * y2) / ((y2 - z) * (y2 * y2 + 1.0))
    };
    let r = integrate_improper(f, tol / pref).map_err(|e| match e {
        Error::NotConverged { estimate, error } => Error::NotConverged {
            estimate: pref * estimate,
            error: pref * error,
        },
        other => other,
    })?;
    Ok(pref * r.value)
}

/// Analytic continuation of `k` to `z ∉ [0, ∞)`:
/// `k(z) = 2(−i + √2(z+i)/(√(−z) + τ₊))`, principal square root.
pub fn k_closed_form(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re >= 0.0 {
        return Err(Error::Domain(format!("k(z) is not defined on [0, ∞), got {z}")));
    }
    let i = C64::new(0.0, 1.0);
    let tau = C64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    Ok(2.0 * (-i + SQRT_2 * (z + i) / ((-z).sqrt() + tau)))
}

/// `Q(z) = α_θ·k(z)/2` for real `z < 0`.
pub fn q_function(z: f64, p: &CParams, tol: f64) -> Result<f64> {
    Ok(0.5 * p.alpha() * k_integral(z, 2.0 * tol / p.alpha())?)
}

/// `Q(z)` off the positive half-line, through [`k_closed_form`].
pub fn q_function_complex(z: C64, p: &CParams) -> Result<C64> {
    Ok(0.5 * p.alpha() * k_closed_form(z)?)
}
